"""Classical brute-force partition and partition comparison."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..condlang import (Add, And, BranchTree, Const, Mul, Not, Or, Rel, Var,
                        collect_paths, expr_width)
from ..partition import Partition, key_rows, row_keys

__all__ = ["ORACLE_CEILING", "brute_force_partition", "compare_partitions",
           "Comparison", "evaluate_arith", "evaluate_cond"]

ORACLE_CEILING = 24

_CMP = {
    "<": np.less, "<=": np.less_equal, ">": np.greater,
    ">=": np.greater_equal, "==": np.equal, "!=": np.not_equal,
}


def evaluate_arith(e, env: dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Const):
        return e.value
    lhs, rhs = evaluate_arith(e.lhs, env), evaluate_arith(e.rhs, env)
    return lhs + rhs if isinstance(e, Add) else lhs * rhs


def evaluate_cond(c, env: dict[str, np.ndarray]) -> np.ndarray:
    """Vectorised truth value of a condition over arrays of assignments."""
    if isinstance(c, Rel):
        return _CMP[c.op](evaluate_arith(c.lhs, env), evaluate_arith(c.rhs, env))
    if isinstance(c, Not):
        return ~evaluate_cond(c.inner, env)
    lhs, rhs = evaluate_cond(c.lhs, env), evaluate_cond(c.rhs, env)
    return lhs & rhs if isinstance(c, And) else lhs | rhs


def _max_width(tree: BranchTree) -> int:
    widths = tree.widths
    best = 0
    for pc in collect_paths(tree):
        for cond, _ in pc.conjuncts:
            stack = [cond]
            while stack:
                c = stack.pop()
                if isinstance(c, Rel):
                    best = max(best, expr_width(c.lhs, widths), expr_width(c.rhs, widths))
                elif isinstance(c, Not):
                    stack.append(c.inner)
                else:
                    stack += [c.lhs, c.rhs]
    return best


def brute_force_partition(tree: BranchTree, ceiling: int = ORACLE_CEILING) -> Partition:
    """Enumerate every assignment and route it down its path constraint."""
    n = tree.n_qubits
    if n > ceiling:
        raise ValueError(f"input space 2^{n} exceeds oracle ceiling 2^{ceiling}")
    # intermediate values wider than int64 fall back to Python integers
    dtype = np.int64 if _max_width(tree) < 63 else object
    names, widths = tree.names, [d.width for d in tree.decls]
    grids = np.meshgrid(*[np.arange(1 << w, dtype=np.int64) for w in widths], indexing="ij")
    columns = [g.reshape(-1) for g in grids]
    rows = np.stack(columns, axis=1) if names else np.zeros((1, 0), np.int64)
    env = {name: col.astype(dtype) for name, col in zip(names, columns)}
    size = rows.shape[0]
    arrays = {}
    for pc in collect_paths(tree):
        mask = np.ones(size, dtype=bool)
        for cond, polarity in pc.conjuncts:
            truth = np.broadcast_to(evaluate_cond(cond, env), (size,))
            mask &= truth if polarity else ~truth
        arrays[pc.branch_id] = rows[mask]
    # meshgrid "ij" order is already lexicographic
    return Partition.from_arrays(names, widths, arrays, presorted=True)


@dataclass
class Comparison:
    """Per-branch differences; each entry is an array of rows."""

    verdict: str
    only_quantum: dict[str, np.ndarray] = field(default_factory=dict)
    only_classical: dict[str, np.ndarray] = field(default_factory=dict)
    counterexamples: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def __str__(self) -> str:
        return "\n".join([self.verdict] + ["  " + c for c in self.counterexamples])


def _fmt(names, row) -> str:
    return "(" + ", ".join(f"{n}={v}" for n, v in zip(names, row)) + ")"


def compare_partitions(q: Partition, c: Partition, limit: int = 10) -> Comparison:
    """Per-branch set difference between a quantum and a classical partition."""
    if set(q.arrays) != set(c.arrays):
        raise ValueError(f"branch ids differ: {sorted(q.arrays)} vs {sorted(c.arrays)}")
    if q.variables != c.variables:
        raise ValueError(f"variables differ: {q.variables} vs {c.variables}")
    # key width per column large enough for every value on either side
    stacked = [r for p in (q, c) for r in p.arrays.values() if len(r)]
    top = np.max(np.concatenate(stacked), axis=0) if stacked else np.zeros(len(q.variables))
    widths = [max(1, int(v).bit_length()) for v in top]
    only_q, only_c, examples = {}, {}, []
    for branch in q.arrays:
        qk = row_keys(q.arrays[branch], widths)
        ck = row_keys(c.arrays[branch], widths)
        for side, diff, label in ((only_q, np.setdiff1d(qk, ck), "quantum"),
                                  (only_c, np.setdiff1d(ck, qk), "classical")):
            if len(diff):
                rows = key_rows(diff, widths)
                side[branch] = rows
                examples += [f"{branch}: {_fmt(q.variables, r)} only in {label}"
                             for r in rows[:limit].tolist()]
    verdict = "FAIL" if examples else "PASS"
    return Comparison(verdict, only_q, only_c, examples[:limit])
