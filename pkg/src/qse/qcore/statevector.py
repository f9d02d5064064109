"""Dense statevector simulation.

Basis indices are little-endian: qubit 0 is the least significant bit.
Gates run through compiled kernels that only visit the amplitude pairs
whose control bits match: a swap for the X family, a butterfly for H.
"""
from __future__ import annotations

from typing import Sequence

import numba
import numpy as np

from .circuit import CircuitFragment, Gate

__all__ = [
    "MAX_QUBITS", "CeilingError", "Statevector", "new_state", "apply_fragment",
    "measure_counts", "marginal_probabilities",
]

MAX_QUBITS = 26

_INV_SQRT2 = 1 / np.sqrt(2)


@numba.njit(cache=True)
def _swap_kernel(psi, fixed_pos, fixed_val, tbit):
    # Visit only indices whose fixed bits (controls, and the target at 0)
    # match; the free index j is expanded by inserting those bits in
    # ascending position order.
    for j in range(psi.size >> fixed_pos.size):
        i = j
        for k in range(fixed_pos.size):
            p = fixed_pos[k]
            i = ((i >> p) << (p + 1)) | (fixed_val[k] << p) | (i & ((1 << p) - 1))
        a = psi[i]
        psi[i] = psi[i | tbit]
        psi[i | tbit] = a


@numba.njit(cache=True)
def _h_kernel(psi, fixed_pos, fixed_val, tbit):
    for j in range(psi.size >> fixed_pos.size):
        i = j
        for k in range(fixed_pos.size):
            p = fixed_pos[k]
            i = ((i >> p) << (p + 1)) | (fixed_val[k] << p) | (i & ((1 << p) - 1))
        a = psi[i]
        b = psi[i | tbit]
        psi[i] = (a + b) * _INV_SQRT2
        psi[i | tbit] = (a - b) * _INV_SQRT2


class CeilingError(MemoryError):
    """Requested allocation is above the configured qubit ceiling."""


class Statevector:
    def __init__(self, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        n = int(amplitudes.size).bit_length() - 1
        if amplitudes.ndim != 1 or amplitudes.size != 1 << n:
            raise ValueError("amplitude vector length must be a power of two")
        self.amplitudes = amplitudes
        self.num_qubits = n

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def _check(self, qubits) -> None:
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise IndexError(f"qubit {q} outside allocation of {self.num_qubits}")

    def apply_gate(self, gate: Gate) -> None:
        """Apply one gate in place."""
        if gate.kind == "I":
            return
        qubits = gate.qubits()
        self._check(qubits)
        kernel = _swap_kernel if gate.is_x else _h_kernel
        for t in gate.targets:
            fixed = sorted([(q, int(p)) for q, p in gate.controls] + [(t, 0)])
            kernel(self.amplitudes,
                   np.array([q for q, _ in fixed], dtype=np.int64),
                   np.array([v for _, v in fixed], dtype=np.int64),
                   1 << t)

    def apply(self, frag: CircuitFragment) -> "Statevector":
        """Apply every gate of ``frag`` in place; returns ``self``."""
        self._check(frag.qubits())
        for gate in frag.gates:
            self.apply_gate(gate)
        return self

    def basis_terms(self, atol: float = 1e-9) -> np.ndarray:
        """Indices of basis states with |amplitude| above ``atol``."""
        return np.flatnonzero(np.abs(self.amplitudes) > atol)

    def __repr__(self) -> str:
        return f"Statevector(num_qubits={self.num_qubits})"


def new_state(num_qubits: int, ceiling: int = MAX_QUBITS) -> Statevector:
    """|0...0> on ``num_qubits`` qubits."""
    if num_qubits < 1:
        raise ValueError("need at least one qubit")
    if num_qubits > ceiling:
        raise CeilingError(
            f"{num_qubits} qubits requested, ceiling is {ceiling}")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(amps)


def apply_fragment(state: Statevector, frag: CircuitFragment) -> Statevector:
    """Return a new state with ``frag`` applied; ``state`` is not modified."""
    return state.copy().apply(frag)


def marginal_probabilities(state: Statevector, qubits: Sequence[int]) -> np.ndarray:
    """Exact marginal over ``qubits``.

    Entry ``k`` of the result is the probability of the outcome whose
    bitstring ``format(k, f"0{len(qubits)}b")`` lists the value of
    ``qubits[0]`` first.
    """
    qubits = list(qubits)
    if not qubits:
        raise ValueError("empty qubit list")
    if len(set(qubits)) != len(qubits):
        raise ValueError("qubits must be distinct")
    state._check(qubits)
    n = state.num_qubits
    probs = state.probabilities().reshape((2,) * n)
    axes = [n - 1 - q for q in qubits]
    rest = tuple(a for a in range(n) if a not in axes)
    marg = probs.sum(axis=rest) if rest else probs
    # remaining axes keep their original relative order; permute to `axes`
    kept = sorted(axes)
    marg = np.transpose(marg, [kept.index(a) for a in axes])
    return marg.reshape(-1)


def measure_counts(state: Statevector, qubits: Sequence[int], shots: int,
                   seed: int) -> dict[str, int]:
    """Sample ``shots`` joint measurements of ``qubits``.

    Bitstrings list ``qubits[0]`` first.  Deterministic for a given seed.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    p = marginal_probabilities(state, qubits)
    p = np.where(p < 1e-12, 0.0, p)
    p /= p.sum()
    counts = np.random.default_rng(seed).multinomial(shots, p)
    width = len(qubits)
    return {format(int(k), f"0{width}b"): int(counts[k])
            for k in np.flatnonzero(counts)}
