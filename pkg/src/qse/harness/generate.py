"""Random condition programs for equivalence testing."""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..condlang import (RELOPS, Add, And, BranchTree, Const, If, Leaf, Mul, Not, Or, Rel,
                        Var, VarDecl)
from ..qsynth import LayoutError, plan_layout

__all__ = ["RELOPS", "random_program", "negate_root"]


class _Gen:
    def __init__(self, rng: np.random.Generator, names: list[str]):
        self.rng = rng
        self.names = names
        self.leaf = 0

    def pick(self, seq):
        return seq[int(self.rng.integers(len(seq)))]

    def atom(self):
        if self.rng.random() < 0.75:
            return Var(self.pick(self.names))
        return Const(int(self.rng.integers(0, 8)))

    def arith(self):
        r = self.rng.random()
        if r < 0.6:
            return Var(self.pick(self.names))
        if r < 0.75:
            return Const(int(self.rng.integers(0, 8)))
        if r < 0.92:
            return Add(self.atom(), self.atom())
        return Mul(Var(self.pick(self.names)), Var(self.pick(self.names)))

    def cond(self, depth: int = 0):
        r = self.rng.random()
        if depth >= 2 or r < 0.5:
            return Rel(self.arith(), self.pick(RELOPS), self.arith())
        if r < 0.65:
            return Not(self.cond(depth + 1))
        kind = And if r < 0.83 else Or
        return kind(self.cond(depth + 1), self.cond(depth + 1))

    def node(self, depth: int, max_depth: int):
        if depth < max_depth and (depth == 0 or self.rng.random() < 0.55):
            return If(self.cond(), self.node(depth + 1, max_depth),
                      self.node(depth + 1, max_depth))
        self.leaf += 1
        return Leaf(f"L{self.leaf}")


def random_program(rng: np.random.Generator, max_depth: int = 3, max_s_width: int = 10,
                   max_qubits: int = 20, max_tries: int = 1000) -> BranchTree:
    """Draw a random program whose circuit fits ``max_qubits``.

    Conditions mix all six relational operators with ``!``, ``&&`` and
    ``||``; operands are variables, small constants, sums and products.
    Programs that would exceed ``max_qubits`` are redrawn.
    """
    for _ in range(max_tries):
        n_vars = int(rng.integers(1, 4))
        names = ["x", "y", "z"][:n_vars]
        widths, budget = [], max_s_width
        for k in range(n_vars):
            w = int(rng.integers(1, min(3, budget - (n_vars - k - 1)) + 1))
            widths.append(w)
            budget -= w
        gen = _Gen(rng, names)
        root = gen.node(0, max_depth)
        tree = BranchTree(tuple(VarDecl(n, w) for n, w in zip(names, widths)), root)
        try:
            plan_layout(tree, ceiling=max_qubits)
        except LayoutError:
            continue
        return tree
    raise RuntimeError(f"no program under {max_qubits} qubits after {max_tries} draws")


def negate_root(tree: BranchTree, swap: bool = True) -> BranchTree:
    """Wrap the root condition in ``!``; with ``swap`` also exchange its branches
    so the program keeps its meaning."""
    root = tree.root
    if not isinstance(root, If):
        raise ValueError("program has no condition")
    then, orelse = (root.orelse, root.then) if swap else (root.then, root.orelse)
    return replace(tree, root=If(Not(root.cond), then, orelse))
