"""Reversible adder, multiplier and comparator.

Registers are sequences of qubit indices, least significant bit first.
Operands may differ in width; the narrower one is zero-extended virtually
(missing high bits are treated as constant |0> when the circuit is built,
so no padding qubits are spent).  All scratch lives in ``anc`` and is
returned to |0>.
"""
from __future__ import annotations

from typing import Optional, Sequence

from .circuit import ZERO, CircuitFragment, FragmentError, Gate, x_gate

__all__ = [
    "adder_fragment", "multiplier_fragment", "comparator_fragment",
    "adder_ancilla", "multiplier_ancilla", "comparator_ancilla",
]

Register = Sequence[int]


def adder_ancilla(wa: int, wb: int) -> int:
    return max(wa, wb) - 1


def multiplier_ancilla(wa: int, wb: int) -> int:
    return wa - 1


def comparator_ancilla(wa: int, wb: int) -> int:
    return max(wa, wb) - 1


def _bit(reg: Register, i: int) -> Optional[int]:
    return reg[i] if i < len(reg) else ZERO


def _check_disjoint(inputs: Sequence[Register], outputs: Sequence[Register]) -> None:
    ins = {q for r in inputs for q in r}
    seen: set[int] = set()
    for r in outputs:
        for q in r:
            if q in ins or q in seen:
                raise FragmentError(f"qubit {q} used twice across registers")
            seen.add(q)


def _cx(target, *controls) -> Optional[Gate]:
    return x_gate(target, controls)


def adder_fragment(a_reg: Register, b_reg: Register, sum_reg: Register,
                   anc: Register) -> CircuitFragment:
    """Out-of-place ripple-carry adder: ``sum_reg ^= a + b``.

    ``sum_reg`` must have ``max(len(a), len(b)) + 1`` qubits.  ``a_reg`` and
    ``b_reg`` are only ever controls, so they may alias.
    """
    n = max(len(a_reg), len(b_reg))
    if len(sum_reg) != n + 1:
        raise FragmentError(f"sum register needs {n + 1} qubits, got {len(sum_reg)}")
    need = adder_ancilla(len(a_reg), len(b_reg))
    if len(anc) < need:
        raise FragmentError(f"adder needs {need} ancillae, got {len(anc)}")
    anc = list(anc[:need])
    _check_disjoint([a_reg, b_reg], [sum_reg, anc])

    # carry[i] feeds bit i; carry[0] is zero, carry[n] is the top sum bit
    carry = [ZERO] + anc + [sum_reg[n]]

    def carry_gates(i):
        a, b, c = _bit(a_reg, i), _bit(b_reg, i), carry[i]
        t = carry[i + 1]
        # majority(a, b, c) = ab ^ ac ^ bc
        return [_cx(t, (a, 1), (b, 1)), _cx(t, (a, 1), (c, 1)),
                _cx(t, (b, 1), (c, 1))]

    gates = []
    for i in range(n):
        s = sum_reg[i]
        gates += [_cx(s, (_bit(a_reg, i), 1)), _cx(s, (_bit(b_reg, i), 1)),
                  _cx(s, (carry[i], 1))]
        gates += carry_gates(i)
    for i in reversed(range(n - 1)):
        gates += carry_gates(i)[::-1]
    return CircuitFragment.build(
        gates, {"a": tuple(a_reg), "b": tuple(b_reg), "sum": tuple(sum_reg),
                "anc": tuple(anc)}, anc)


def _inplace_add(a_reg: Register, t_reg: Register, carries: list, ctrl) -> list:
    """VBE-style ``t += a`` with ``len(t) == len(a) + 1`` and t's top bit |0>.

    ``carries`` has ``len(a)`` entries; the first is ZERO.
    """
    n = len(a_reg)
    c = list(carries) + [t_reg[n]]

    def carry(i):
        return [_cx(c[i + 1], (a_reg[i], 1), (t_reg[i], 1), ctrl),
                _cx(t_reg[i], (a_reg[i], 1), ctrl),
                _cx(c[i + 1], (c[i], 1), (t_reg[i], 1), ctrl)]

    def sum_(i):
        return [_cx(t_reg[i], (a_reg[i], 1), ctrl), _cx(t_reg[i], (c[i], 1), ctrl)]

    gates = []
    for i in range(n):
        gates += carry(i)
    gates.append(_cx(t_reg[n - 1], (a_reg[n - 1], 1), ctrl))
    gates += sum_(n - 1)
    for i in reversed(range(n - 1)):
        gates += carry(i)[::-1]
        gates += sum_(i)
    return gates


def multiplier_fragment(a_reg: Register, b_reg: Register, prod_reg: Register,
                        anc: Register) -> CircuitFragment:
    """Shift-and-add multiplier: ``prod_reg = a * b`` for ``prod_reg`` at |0>.

    For each bit ``b_j`` the shifted ``a`` is added into the product window
    ``prod[j : j+len(a)+1]`` under control of ``b_j``.
    """
    na, nb = len(a_reg), len(b_reg)
    if len(prod_reg) != na + nb:
        raise FragmentError(f"product register needs {na + nb} qubits, got {len(prod_reg)}")
    need = multiplier_ancilla(na, nb)
    if len(anc) < need:
        raise FragmentError(f"multiplier needs {need} ancillae, got {len(anc)}")
    anc = list(anc[:need])
    _check_disjoint([a_reg, b_reg], [prod_reg, anc])
    carries = [ZERO] + anc
    gates = []
    for j in range(nb):
        window = prod_reg[j:j + na + 1]
        gates += _inplace_add(a_reg, window, carries, (b_reg[j], 1))
    return CircuitFragment.build(
        gates, {"a": tuple(a_reg), "b": tuple(b_reg), "prod": tuple(prod_reg),
                "anc": tuple(anc)}, anc)


def _borrow_chain(a_reg, b_reg, out, anc, n) -> list:
    """Gates computing the final borrow of ``a - b`` into ``out``.

    borrow' = (!a & b) ^ (a & b & borrow) ^ (!a & !b & borrow); the three
    terms are mutually exclusive so each is one multi-controlled X.
    """
    borrow = [ZERO] + list(anc) + [out]

    def step(i):
        a, b, c = _bit(a_reg, i), _bit(b_reg, i), borrow[i]
        t = borrow[i + 1]
        return [_cx(t, (a, 0), (b, 1)), _cx(t, (a, 1), (b, 1), (c, 1)),
                _cx(t, (a, 0), (b, 0), (c, 1))]

    gates = []
    for i in range(n):
        gates += step(i)
    for i in reversed(range(n - 1)):
        gates += step(i)[::-1]
    return gates


def comparator_fragment(a_reg: Register, b_reg: Register, c1: int, c2: int,
                        anc: Register) -> CircuitFragment:
    """Three-way comparison into two flag qubits.

    From |c1 c2> = |00>: a > b gives |10>, a < b gives |01>, a == b leaves |00>.
    ``c1`` receives the borrow of ``b - a`` and ``c2`` the borrow of ``a - b``;
    the intermediate borrows share ``anc`` and are uncomputed.
    """
    if c1 == c2:
        raise FragmentError("c1 and c2 must be distinct qubits")
    n = max(len(a_reg), len(b_reg))
    need = comparator_ancilla(len(a_reg), len(b_reg))
    if len(anc) < need:
        raise FragmentError(f"comparator needs {need} ancillae, got {len(anc)}")
    anc = list(anc[:need])
    _check_disjoint([a_reg, b_reg], [[c1, c2], anc])
    gates = _borrow_chain(a_reg, b_reg, c2, anc, n)
    gates += _borrow_chain(b_reg, a_reg, c1, anc, n)
    return CircuitFragment.build(
        gates, {"a": tuple(a_reg), "b": tuple(b_reg), "c": (c1, c2),
                "anc": tuple(anc)}, anc)
