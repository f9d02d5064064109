"""Compile a branch tree into a test-case-space partitioning circuit.

The circuit acts on

* ``|s>``: one sub-register per declared variable, put into uniform
  superposition by a layer of Hadamards;
* ``|c>``: flag qubits.  Every relational condition writes a comparator
  result ``|c^i c^(i-1)>`` (``10`` for greater, ``01`` for less, ``00`` for
  equal) and every ``&&``/``||`` writes one output flag;
* scratch and ancilla qubits, always uncomputed back to |0>.

Which flag states satisfy a condition is described by a *recipe*: a tuple
of mutually exclusive control arms, each arm a conjunction of
``(qubit, polarity)`` controls.  Nested conditions are compiled under the
recipe of the path that leads to them, so sibling subtrees at the same depth
act on disjoint subspaces and share one block of flag qubits.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .condlang import (Add, And, BranchTree, Const, CondExpr, If, Leaf, Mul,
                       Node, Not, Or, Rel, Var, condition_nodes, expr_width,
                       format_cond, iter_conditions, strip_not)
from .qcore import (MAX_QUBITS, CircuitFragment, Control, FragmentError, Gate,
                    adder_ancilla, adder_fragment, comparator_ancilla,
                    comparator_fragment, controlled, merge_controls,
                    multiplier_ancilla, multiplier_fragment, x_gate)

__all__ = [
    "Arm", "Recipe", "FlagSemantics", "ConditionSlot", "VariableLayout",
    "FlagDictionary", "QseCircuit", "LayoutError", "t_module",
    "complement_recipe", "conjoin", "apply_not", "plan_layout",
    "prepare_space", "relational_fragment", "logical_and_fragment",
    "logical_or_fragment", "compile_qse", "pattern_matches", "patterns_overlap",
]

Arm = tuple[Control, ...]
Recipe = tuple[Arm, ...]


class LayoutError(ValueError):
    """The program does not fit the qubit ceiling."""


# -- control recipes -------------------------------------------------------

def t_module(op: str, flag_pair: tuple[int, int]) -> Recipe:
    """Controls selecting the flag states in which ``op`` holds.

    ``flag_pair`` is ``(c_i, c_(i-1))`` as written by the comparator.
    """
    hi, lo = flag_pair
    return {
        "<": (((hi, False), (lo, True)),),
        ">": (((hi, True), (lo, False)),),
        "==": (((hi, False), (lo, False)),),
        "<=": (((hi, False),),),
        ">=": (((lo, False),),),
        "!=": (((hi, False), (lo, True)), ((hi, True), (lo, False))),
    }[op]


def complement_recipe(op: str, flag_pair: tuple[int, int]) -> Recipe:
    """Controls selecting the reachable flag states in which ``op`` fails.

    The comparator never produces ``11``, so ``<`` fails exactly when
    ``c_(i-1)`` is 0, and similarly for the other ordered operators.
    """
    hi, lo = flag_pair
    return {
        "<": (((lo, False),),),
        ">": (((hi, False),),),
        "<=": (((hi, True),),),
        ">=": (((lo, True),),),
        "==": (((hi, False), (lo, True)), ((hi, True), (lo, False))),
        "!=": (((hi, False), (lo, False)),),
    }[op]


def conjoin(*recipes: Recipe) -> Recipe:
    """Conjunction of recipes: the cross product of their arms.

    Contradictory arms are dropped, so the result may be empty (unsatisfiable).
    """
    arms: list[Arm] = [()]
    for recipe in recipes:
        nxt = []
        for arm in arms:
            for other in recipe:
                merged = merge_controls(arm, other)
                if merged is not None:
                    nxt.append(merged)
        arms = nxt
    return tuple(arms)


@dataclass(frozen=True)
class FlagSemantics:
    sat: Recipe
    unsat: Recipe


def apply_not(sem: FlagSemantics) -> FlagSemantics:
    """Negation costs no gates: it only swaps which flag states satisfy."""
    return FlagSemantics(sem.unsat, sem.sat)


# -- layout ----------------------------------------------------------------

@dataclass(frozen=True)
class ConditionSlot:
    node: CondExpr
    kind: str                 # "rel", "and" or "or"
    flags: tuple[int, ...]    # qubits: (c_i, c_(i-1)) for rel, (out,) otherwise
    level: Optional[int]      # depth of the owning block; None if shared


@dataclass(frozen=True)
class VariableLayout:
    variables: dict[str, tuple[int, ...]]
    flags: tuple[int, ...]            # flag index k -> qubit
    scratch: tuple[int, ...]
    ancilla: tuple[int, ...]
    slots: dict[CondExpr, ConditionSlot]
    level_widths: tuple[int, ...]
    num_qubits: int

    @property
    def s_width(self) -> int:
        return sum(len(r) for r in self.variables.values())

    @property
    def s_qubits(self) -> tuple[int, ...]:
        return tuple(q for r in self.variables.values() for q in r)

    @property
    def flag_width(self) -> int:
        return len(self.flags)

    def flag_index(self, qubit: int) -> int:
        return self.flags.index(qubit)

    def breakdown(self) -> dict[str, int]:
        return {"s": self.s_width, "flags": self.flag_width,
                "scratch": len(self.scratch), "ancilla": len(self.ancilla),
                "total": self.num_qubits}

    def semantics(self, cond: CondExpr) -> FlagSemantics:
        inner, polarity = strip_not(cond)
        slot = self.slots[inner]
        if slot.kind == "rel":
            sem = FlagSemantics(t_module(inner.op, slot.flags),
                                complement_recipe(inner.op, slot.flags))
        else:
            (f,) = slot.flags
            sem = FlagSemantics((((f, True),),), (((f, False),),))
        return sem if polarity else apply_not(sem)

    def pattern(self, arm: Arm) -> str:
        """Render an arm over the flag register, most significant flag first."""
        m = self.flag_width
        chars = ["*"] * m
        for q, pol in arm:
            chars[m - 1 - self.flag_index(q)] = "1" if pol else "0"
        return "".join(chars)


def _scratch_need(e, widths) -> int:
    if isinstance(e, Var):
        return 0
    if isinstance(e, Const):
        return expr_width(e, widths)
    return _scratch_need(e.lhs, widths) + _scratch_need(e.rhs, widths) + expr_width(e, widths)


def _ancilla_need(e, widths) -> int:
    if isinstance(e, (Var, Const)):
        return 0
    lw, rw = expr_width(e.lhs, widths), expr_width(e.rhs, widths)
    own = adder_ancilla(lw, rw) if isinstance(e, Add) else multiplier_ancilla(lw, rw)
    return max(own, _ancilla_need(e.lhs, widths), _ancilla_need(e.rhs, widths))


def _node_kind(node: CondExpr) -> str:
    return {Rel: "rel", And: "and", Or: "or"}[type(node)]


def plan_layout(tree: BranchTree, ceiling: int = MAX_QUBITS) -> VariableLayout:
    """Assign qubits to variables, flags, scratch and ancillae.

    Qubits are numbered ``|s>`` first (variables in declaration order, each
    least significant bit first), then flags, scratch and ancillae.  Flags are
    allocated per depth level, root first; within a condition operands come
    before the operator that combines them.  Conditions occurring more than
    once get dedicated flags after all level blocks.
    """
    widths = tree.widths
    ifs = list(iter_conditions(tree.root))
    occurrences = Counter(n for node, _ in ifs for n in condition_nodes(node.cond))
    shared = [n for n in occurrences if occurrences[n] > 1]

    def size(node):
        return 2 if isinstance(node, Rel) else 1

    depth = max((d for _, d in ifs), default=-1) + 1
    level_widths = [0] * depth
    for node, d in ifs:
        need = sum(size(n) for n in condition_nodes(node.cond) if occurrences[n] == 1)
        level_widths[d] = max(level_widths[d], need)
    level_base = [sum(level_widths[:d]) for d in range(depth)]
    m = sum(level_widths) + sum(size(n) for n in shared)

    n_s = tree.n_qubits
    flag_qubits = tuple(range(n_s, n_s + m))
    slots: dict[CondExpr, ConditionSlot] = {}
    for node, d in ifs:
        k = level_base[d]
        for n in condition_nodes(node.cond):
            if occurrences[n] > 1:
                continue
            if isinstance(n, Rel):
                slots[n] = ConditionSlot(n, "rel", (flag_qubits[k + 1], flag_qubits[k]), d)
            else:
                slots[n] = ConditionSlot(n, _node_kind(n), (flag_qubits[k],), d)
            k += size(n)
    k = sum(level_widths)
    for n in shared:
        if isinstance(n, Rel):
            slots[n] = ConditionSlot(n, "rel", (flag_qubits[k + 1], flag_qubits[k]), None)
        else:
            slots[n] = ConditionSlot(n, _node_kind(n), (flag_qubits[k],), None)
        k += size(n)

    rels = [n for n in slots if isinstance(n, Rel)]
    n_scratch = max((_scratch_need(r.lhs, widths) + _scratch_need(r.rhs, widths)
                     for r in rels), default=0)
    n_anc = max((max(_ancilla_need(r.lhs, widths), _ancilla_need(r.rhs, widths),
                     comparator_ancilla(expr_width(r.lhs, widths), expr_width(r.rhs, widths)))
                 for r in rels), default=0)

    variables = {}
    q = 0
    for d in tree.decls:
        variables[d.name] = tuple(range(q, q + d.width))
        q += d.width
    q += m
    scratch = tuple(range(q, q + n_scratch))
    q += n_scratch
    ancilla = tuple(range(q, q + n_anc))
    q += n_anc
    layout = VariableLayout(variables, flag_qubits, scratch, ancilla, slots,
                            tuple(level_widths), q)
    if q > ceiling:
        parts = ", ".join(f"{k}={v}" for k, v in layout.breakdown().items())
        raise LayoutError(f"program needs {q} qubits, ceiling is {ceiling} ({parts})")
    return layout


# -- fragments -------------------------------------------------------------

def prepare_space(layout: VariableLayout) -> CircuitFragment:
    """Hadamard on every ``|s>`` qubit; flags and scratch stay at |0>."""
    gates = [Gate("H", (q,)) for q in layout.s_qubits]
    return CircuitFragment(tuple(gates), dict(layout.variables))


class _ExprCompiler:
    """Evaluates arithmetic expressions into scratch registers."""

    def __init__(self, layout: VariableLayout):
        self.layout = layout
        self.free = list(layout.scratch)
        self.gates: list[Gate] = []

    def alloc(self, width: int) -> tuple[int, ...]:
        if width > len(self.free):
            raise FragmentError("expression does not fit the scratch register")
        reg, self.free = tuple(self.free[:width]), self.free[width:]
        return reg

    def compute(self, e) -> tuple[int, ...]:
        if isinstance(e, Var):
            return self.layout.variables[e.name]
        if isinstance(e, Const):
            reg = self.alloc(max(1, e.value.bit_length()))
            self.gates += [Gate("X", (q,)) for k, q in enumerate(reg) if e.value >> k & 1]
            return reg
        lhs, rhs = self.compute(e.lhs), self.compute(e.rhs)
        anc = self.layout.ancilla
        if isinstance(e, Add):
            out = self.alloc(max(len(lhs), len(rhs)) + 1)
            frag = adder_fragment(lhs, rhs, out, anc)
        else:
            out = self.alloc(len(lhs) + len(rhs))
            frag = multiplier_fragment(lhs, rhs, out, anc)
        self.gates += frag.gates
        return out


def relational_fragment(rel: Rel, layout: VariableLayout,
                        controls: Sequence[Control] = ()) -> CircuitFragment:
    """Write ``rel``'s comparator result into its flag pair.

    Computes both operands into scratch, compares them, then uncomputes the
    operands so the scratch register can be reused.  Every gate carries
    ``controls``.
    """
    slot = layout.slots[rel]
    hi, lo = slot.flags
    comp = _ExprCompiler(layout)
    phi1 = comp.compute(rel.lhs)
    phi2 = comp.compute(rel.rhs)
    compute = CircuitFragment(tuple(comp.gates))
    compare = comparator_fragment(phi1, phi2, hi, lo, layout.ancilla)
    frag = compute + compare + compute.inverse()
    frag = CircuitFragment(frag.gates, {"phi1": phi1, "phi2": phi2, "flags": (hi, lo)},
                           frozenset(layout.scratch) | frozenset(layout.ancilla))
    return controlled(frag, controls)


def _flip_on(out_flag: int, recipe: Recipe) -> list[Gate]:
    gates = []
    for arm in recipe:
        if any(q == out_flag for q, _ in arm):
            raise FragmentError(f"control overlaps output flag {out_flag}")
        gates.append(x_gate(out_flag, arm))
    return gates


def logical_and_fragment(lhs_ctrl: Recipe, rhs_ctrl: Recipe, out_flag: int) -> CircuitFragment:
    """Flip ``out_flag`` exactly where both operand recipes hold."""
    gates = _flip_on(out_flag, conjoin(lhs_ctrl, rhs_ctrl))
    return CircuitFragment.build(gates, {"out": (out_flag,)})


def logical_or_fragment(lhs_ctrl: Recipe, rhs_ctrl: Recipe, out_flag: int) -> CircuitFragment:
    """Flip on lhs, flip on rhs, flip again where both hold: ``out = lhs | rhs``."""
    gates = (_flip_on(out_flag, lhs_ctrl) + _flip_on(out_flag, rhs_ctrl)
             + _flip_on(out_flag, conjoin(lhs_ctrl, rhs_ctrl)))
    return CircuitFragment.build(gates, {"out": (out_flag,)})


# -- dictionary ------------------------------------------------------------

def pattern_matches(pattern: str, bits: str) -> bool:
    return len(pattern) == len(bits) and all(p in ("*", b) for p, b in zip(pattern, bits))


def patterns_overlap(p: str, q: str) -> bool:
    """True if some bitstring matches both patterns."""
    return all(a == "*" or b == "*" or a == b for a, b in zip(p, q))


@dataclass(frozen=True)
class ConditionRecord:
    text: str
    kind: str
    flag_indices: tuple[int, ...]
    level: Optional[int]


@dataclass
class FlagDictionary:
    """Branch id -> flag patterns (alternatives), plus per-condition records."""

    width: int
    branches: dict[str, tuple[str, ...]]
    records: list[ConditionRecord] = field(default_factory=list)

    def _ordered(self) -> list[tuple[str, str]]:
        pairs = [(p, b) for b, ps in self.branches.items() for p in ps]
        return sorted(pairs, key=lambda pb: pb[0].count("*"))

    def match(self, bits: str) -> Optional[str]:
        """Branch whose pattern matches ``bits`` (most specific first)."""
        for pattern, branch in self._ordered():
            if pattern_matches(pattern, bits):
                return branch
        return None

    def overlaps(self) -> list[tuple[str, str]]:
        """Pairs of distinct branches whose patterns can match one bitstring."""
        out = []
        items = list(self.branches.items())
        for i, (a, pa) in enumerate(items):
            for b, pb in items[i + 1:]:
                if any(patterns_overlap(x, y) for x in pa for y in pb):
                    out.append((a, b))
        return out

    def to_text(self) -> str:
        lines = [f"{b} {'|'.join(ps) if ps else '-'}" for b, ps in self.branches.items()]
        return "\n".join(lines) + "\n"


# -- composition -----------------------------------------------------------

@dataclass(frozen=True)
class QseCircuit:
    tree: BranchTree
    layout: VariableLayout
    prep: CircuitFragment
    body: CircuitFragment
    dictionary: FlagDictionary

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits

    @property
    def fragment(self) -> CircuitFragment:
        return self.prep + self.body

    def netlist(self) -> str:
        lay = self.layout
        head = [f"# qubits {lay.num_qubits}"]
        head += [f"# var {name} = [{','.join(map(str, qs))}]"
                 for name, qs in lay.variables.items()]
        head.append(f"# flags = [{','.join(map(str, lay.flags))}]")
        head.append(f"# scratch = [{','.join(map(str, lay.scratch))}]")
        head.append(f"# ancilla = [{','.join(map(str, lay.ancilla))}]")
        gates = [str(g) for g in self.prep.gates + self.body.gates]
        return "\n".join(head + gates) + "\n"


def _node_fragment(node: CondExpr, layout: VariableLayout) -> CircuitFragment:
    if isinstance(node, Rel):
        return relational_fragment(node, layout)
    (out,) = layout.slots[node].flags
    lhs, rhs = layout.semantics(node.lhs).sat, layout.semantics(node.rhs).sat
    build = logical_and_fragment if isinstance(node, And) else logical_or_fragment
    return build(lhs, rhs, out)


def compile_qse(tree: BranchTree, layout: Optional[VariableLayout] = None) -> QseCircuit:
    """Build preparation, body and flag dictionary for ``tree``.

    The root condition is compiled without controls; every nested condition
    is compiled under the conjunction of the recipes along its path (the
    satisfying recipe on a then-edge, the complementary one on an else-edge).
    For each ``If`` the subtree that the un-negated condition selects is
    visited first, so wrapping a condition in ``!`` and swapping its branches
    leaves the gate list unchanged.
    """
    layout = layout or plan_layout(tree)
    fragments: list[CircuitFragment] = []
    branches: dict[str, tuple[str, ...]] = {}

    def emit(node: CondExpr, path: Recipe) -> None:
        frag = _node_fragment(node, layout)
        for arm in path:
            fragments.append(controlled(frag, arm))

    for node, slot in layout.slots.items():
        if slot.level is None:
            emit(node, ((),))

    def walk(node: Node, path: Recipe) -> None:
        if isinstance(node, Leaf):
            branches[node.branch_id] = tuple(dict.fromkeys(layout.pattern(a) for a in path))
            return
        for n in condition_nodes(node.cond):
            if layout.slots[n].level is not None:
                emit(n, path)
        sem = layout.semantics(node.cond)
        sides = [(node.then, sem.sat), (node.orelse, sem.unsat)]
        if not strip_not(node.cond)[1]:
            sides.reverse()
        for child, recipe in sides:
            walk(child, conjoin(path, recipe))

    walk(tree.root, ((),))
    branches = {b: branches[b] for b in tree.leaf_ids()}

    records = [ConditionRecord(format_cond(n), s.kind,
                               tuple(layout.flag_index(q) for q in s.flags), s.level)
               for n, s in layout.slots.items()]
    body = CircuitFragment(tuple(g for f in fragments for g in f.gates),
                           {"flags": layout.flags},
                           frozenset(layout.scratch) | frozenset(layout.ancilla))
    return QseCircuit(tree, layout, prepare_space(layout), body,
                      FlagDictionary(layout.flag_width, branches, records))
