"""Gates and composable circuit fragments.

Every gate here is either a Hadamard, an identity, or an X with an arbitrary
list of controls.  A control is a ``(qubit, polarity)`` pair; polarity
``False`` is a 0-control (the open circle).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

__all__ = [
    "Control", "Gate", "CircuitFragment", "FragmentError", "ZERO",
    "x_gate", "controlled", "merge_controls",
]

Control = tuple[int, bool]

#: Placeholder for a qubit known to be |0> (virtual zero extension).
ZERO = None

_X_KINDS = ("X", "CNOT", "Toffoli", "MultiControlledX")
KINDS = ("H", "I") + _X_KINDS


class FragmentError(ValueError):
    """Invalid gate or fragment construction."""


def _x_kind(n_controls: int) -> str:
    return _X_KINDS[min(n_controls, 3)]


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[Control, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FragmentError(f"unknown gate kind {self.kind!r}")
        if not self.targets:
            raise FragmentError("gate needs at least one target")
        cq = [q for q, _ in self.controls]
        if len(set(cq)) != len(cq):
            raise FragmentError(f"repeated control qubit in {self.controls}")
        if len(set(self.targets)) != len(self.targets):
            raise FragmentError(f"repeated target in {self.targets}")
        if set(cq) & set(self.targets):
            raise FragmentError(
                f"targets {self.targets} overlap controls {self.controls}")
        if any(q < 0 for q in cq + list(self.targets)):
            raise FragmentError("negative qubit index")
        if self.kind in _X_KINDS and self.kind != _x_kind(len(self.controls)):
            raise FragmentError(
                f"{self.kind} with {len(self.controls)} controls")

    @property
    def is_x(self) -> bool:
        return self.kind in _X_KINDS

    def qubits(self) -> set[int]:
        return set(self.targets) | {q for q, _ in self.controls}

    def with_controls(self, extra: Sequence[Control]) -> "Gate":
        controls = self.controls + tuple(extra)
        kind = _x_kind(len(controls)) if self.is_x else self.kind
        return Gate(kind, self.targets, controls)

    def __str__(self) -> str:
        targets = ",".join(map(str, self.targets))
        controls = ",".join(f"({q},{'+' if p else '-'})" for q, p in self.controls)
        return f"GATE {self.kind} targets=[{targets}] controls=[{controls}]"


def merge_controls(*groups: Iterable) -> Optional[tuple[Control, ...]]:
    """Conjoin control lists.

    Entries on :data:`ZERO` are resolved statically: a 0-control on a known
    zero always holds and is dropped, a 1-control never holds.  Duplicate
    controls collapse.  Returns ``None`` when the conjunction is unsatisfiable.
    """
    seen: dict[int, bool] = {}
    for group in groups:
        for q, pol in group:
            if q is ZERO:
                if pol:
                    return None
                continue
            pol = bool(pol)
            if seen.get(q, pol) != pol:
                return None
            seen[q] = pol
    return tuple(seen.items())


def x_gate(target: int, controls: Iterable = ()) -> Optional[Gate]:
    """X on ``target`` under ``controls``, or ``None`` if it can never fire."""
    if target is ZERO:
        raise FragmentError("cannot target a virtual zero qubit")
    merged = merge_controls(controls)
    if merged is None:
        return None
    return Gate(_x_kind(len(merged)), (target,), merged)


@dataclass(frozen=True)
class CircuitFragment:
    """An ordered gate list over named registers.

    ``ancilla`` lists qubits the fragment promises to return to |0> when
    they start in |0>.
    """

    gates: tuple[Gate, ...] = ()
    registers: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    ancilla: frozenset[int] = frozenset()

    @classmethod
    def build(cls, gates: Iterable[Optional[Gate]], registers=None, ancilla=()):
        return cls(tuple(g for g in gates if g is not None),
                   dict(registers or {}), frozenset(ancilla))

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: "CircuitFragment") -> "CircuitFragment":
        registers = dict(self.registers)
        registers.update(other.registers)
        return CircuitFragment(self.gates + other.gates, registers,
                               self.ancilla | other.ancilla)

    def qubits(self) -> set[int]:
        out: set[int] = set()
        for g in self.gates:
            out |= g.qubits()
        for reg in self.registers.values():
            out.update(reg)
        return out

    def inverse(self) -> "CircuitFragment":
        # every gate kind used here is self-inverse
        return CircuitFragment(self.gates[::-1], self.registers, self.ancilla)

    def netlist(self) -> str:
        head = [f"# register {name} = [{','.join(map(str, qs))}]"
                for name, qs in self.registers.items()]
        if self.ancilla:
            head.append(f"# ancilla = [{','.join(map(str, sorted(self.ancilla)))}]")
        return "\n".join(head + [str(g) for g in self.gates]) + "\n"


def controlled(frag: CircuitFragment, controls: Sequence[Control]) -> CircuitFragment:
    """Add ``controls`` to every gate of ``frag``.

    The result acts as ``frag`` on basis states where every control matches
    its polarity and as the identity elsewhere.  Controls may coincide with
    qubits the fragment only reads; a gate whose own control contradicts one
    of ``controls`` can never fire and is dropped.  Controls on qubits the
    fragment writes are rejected.
    """
    controls = tuple((q, bool(p)) for q, p in controls)
    cq = {q for q, _ in controls}
    if len(cq) != len(controls):
        raise FragmentError(f"repeated control qubit in {controls}")
    written = {t for g in frag.gates for t in g.targets}
    clash = cq & written
    if clash:
        raise FragmentError(f"control qubits {sorted(clash)} are written by the fragment")
    if not controls:
        return frag
    gates = []
    for g in frag.gates:
        merged = merge_controls(g.controls, controls)
        if merged is not None:
            gates.append(Gate(_x_kind(len(merged)) if g.is_x else g.kind, g.targets, merged))
    return CircuitFragment(tuple(gates), frag.registers, frag.ancilla)
