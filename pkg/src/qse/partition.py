"""Run a compiled circuit and read the test-case partition off the flags."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .qcore import Statevector, measure_counts, new_state
from .qsynth import QseCircuit, VariableLayout

__all__ = [
    "TestCase", "Partition", "PartitionReport", "SynthesisError", "simulate",
    "run_and_extract", "sample_histogram", "verify_partition",
    "measured_qubits", "decode_outcome", "group_by_branch", "histogram_csv",
    "row_keys", "key_rows",
]

AMPLITUDE_ATOL = 1e-9


class SynthesisError(RuntimeError):
    """The final state is not a clean flag-labelled partition."""


@dataclass(frozen=True, order=True)
class TestCase:
    """One input assignment; ``values`` follow the declaration order."""

    __test__ = False  # keep pytest from collecting this class

    values: tuple[int, ...]
    names: tuple[str, ...] = field(compare=False)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.names, self.values))

    def __str__(self) -> str:
        return "(" + ", ".join(f"{n}={v}" for n, v in zip(self.names, self.values)) + ")"


def _sort_rows(rows: np.ndarray) -> np.ndarray:
    if len(rows) < 2 or rows.shape[1] == 0:
        return rows
    return rows[np.lexsort(rows.T[::-1])]


def row_keys(rows: np.ndarray, widths: Sequence[int]) -> np.ndarray:
    """Encode rows as integers, first column most significant, so key order
    is lexicographic row order.  Values must fit their widths."""
    keys = np.zeros(len(rows), dtype=np.int64)
    for col, w in zip(rows.T, widths):
        keys = (keys << w) | col
    return keys


def key_rows(keys: np.ndarray, widths: Sequence[int]) -> np.ndarray:
    cols = []
    shift = sum(widths)
    for w in widths:
        shift -= w
        cols.append((keys >> shift) & ((1 << w) - 1))
    return np.stack(cols, axis=1) if cols else np.zeros((len(keys), 0), np.int64)


@dataclass(eq=False)
class Partition:
    """Test cases per branch.

    Each branch holds an ``(k, len(variables))`` integer array whose rows are
    sorted lexicographically in declaration order; :attr:`subsets` exposes
    the same data as :class:`TestCase` tuples, built on first access.
    """

    variables: tuple[str, ...]
    widths: tuple[int, ...]
    arrays: dict[str, np.ndarray]
    patterns: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @classmethod
    def from_arrays(cls, names, widths, arrays: Mapping[str, np.ndarray],
                    patterns=None, presorted: bool = False) -> "Partition":
        names = tuple(names)
        out = {}
        for b, rows in arrays.items():
            rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(names))
            out[b] = rows if presorted else _sort_rows(rows)
        return cls(names, tuple(widths), out, dict(patterns or {}))

    @classmethod
    def from_values(cls, names, widths, subsets: Mapping[str, Iterable[tuple[int, ...]]],
                    patterns=None) -> "Partition":
        return cls.from_arrays(names, widths,
                               {b: np.array(list(v), dtype=np.int64) for b, v in subsets.items()},
                               patterns)

    @cached_property
    def subsets(self) -> dict[str, tuple[TestCase, ...]]:
        return {b: tuple(TestCase(tuple(r), self.variables) for r in rows.tolist())
                for b, rows in self.arrays.items()}

    @property
    def space_size(self) -> int:
        return 1 << sum(self.widths)

    def sizes(self) -> dict[str, int]:
        return {b: len(rows) for b, rows in self.arrays.items()}

    def values(self, branch: str) -> set[tuple[int, ...]]:
        return set(map(tuple, self.arrays[branch].tolist()))

    def keys(self, branch: str) -> np.ndarray:
        return row_keys(self.arrays[branch], self.widths)

    def covered_fraction(self) -> float:
        if not self.arrays:
            return 0.0
        return sum(1 for rows in self.arrays.values() if len(rows)) / len(self.arrays)

    def to_json(self) -> str:
        doc = {
            "variables": dict(zip(self.variables, self.widths)),
            "space_size": self.space_size,
            "branches": [
                {"id": b, "pattern": "|".join(self.patterns.get(b, ())),
                 "size": len(rows),
                 "test_cases": [dict(zip(self.variables, r)) for r in rows.tolist()]}
                for b, rows in self.arrays.items()
            ],
        }
        return json.dumps(doc, indent=2)


def simulate(circuit: QseCircuit) -> Statevector:
    state = new_state(circuit.num_qubits)
    state.apply(circuit.prep)
    state.apply(circuit.body)
    return state


def _bits(idx: np.ndarray, qubits) -> np.ndarray:
    out = np.zeros_like(idx)
    for k, q in enumerate(qubits):
        out |= ((idx >> q) & 1) << k
    return out


def run_and_extract(circuit: QseCircuit, state: Optional[Statevector] = None) -> Partition:
    """Simulate ``circuit`` and decode every basis term into its branch.

    Raises :class:`SynthesisError` when a term's flags match no branch, when
    amplitudes are not all ``2**(-n/2)``, when an input appears with two flag
    states, or when scratch qubits are left dirty.
    """
    lay = circuit.layout
    state = state if state is not None else simulate(circuit)
    terms = state.basis_terms(AMPLITUDE_ATOL)
    amps = state.amplitudes[terms]
    n = lay.s_width
    expected = 2.0 ** (-n / 2)
    bad = np.abs(amps - expected) > AMPLITUDE_ATOL
    if bad.any():
        raise SynthesisError(
            f"non-uniform amplitude {amps[bad][0]} (expected {expected}) "
            f"at basis index {int(terms[bad][0])}")
    dirty = _bits(terms, lay.scratch + lay.ancilla)
    if dirty.any():
        raise SynthesisError(f"scratch not restored at basis index {int(terms[dirty != 0][0])}")
    s_vals = _bits(terms, lay.s_qubits)
    if len(np.unique(s_vals)) != len(s_vals) or len(s_vals) != 1 << n:
        raise SynthesisError("flags are not a function of the input register")

    names = tuple(lay.variables)
    rows = np.stack([_bits(terms, lay.variables[v]) for v in names], axis=1)
    flag_vals = _bits(terms, lay.flags)
    m = lay.flag_width
    branch_ids = list(circuit.dictionary.branches)
    owner = np.empty(len(terms), dtype=np.int64)
    for fv in np.unique(flag_vals).tolist():
        bits = format(fv, f"0{m}b") if m else ""
        branch = circuit.dictionary.match(bits)
        if branch is None:
            raise SynthesisError(f"flag state {bits!r} matches no branch")
        owner[flag_vals == fv] = branch_ids.index(branch)
    widths = tuple(len(lay.variables[v]) for v in names)
    arrays = {b: rows[owner == k] for k, b in enumerate(branch_ids)}
    return Partition.from_arrays(names, widths, arrays, circuit.dictionary.branches)


def measured_qubits(layout: VariableLayout) -> list[int]:
    """Joint readout order: flags (most significant first), then every
    variable in declaration order, each most significant bit first."""
    order = list(reversed(layout.flags))
    for reg in layout.variables.values():
        order += list(reversed(reg))
    return order


def sample_histogram(circuit: QseCircuit, shots: int, seed: int,
                     state: Optional[Statevector] = None) -> dict[str, int]:
    """Seeded joint measurement of flags and inputs (see :func:`measured_qubits`)."""
    state = state if state is not None else simulate(circuit)
    return measure_counts(state, measured_qubits(circuit.layout), shots, seed)


def decode_outcome(bitstring: str, circuit: QseCircuit) -> tuple[TestCase, str]:
    """Split a readout bitstring into (test case, flag bits)."""
    lay = circuit.layout
    m = lay.flag_width
    flags, rest = bitstring[:m], bitstring[m:]
    values = []
    for reg in lay.variables.values():
        values.append(int(rest[:len(reg)], 2))
        rest = rest[len(reg):]
    return TestCase(tuple(values), tuple(lay.variables)), flags


def group_by_branch(hist: Mapping[str, int], circuit: QseCircuit) -> dict[str, dict[str, int]]:
    """Split a histogram into one sub-histogram per branch."""
    out: dict[str, dict[str, int]] = {b: {} for b in circuit.dictionary.branches}
    for bits, count in hist.items():
        _, flags = decode_outcome(bits, circuit)
        branch = circuit.dictionary.match(flags)
        if branch is None:
            raise SynthesisError(f"outcome {bits} matches no branch")
        out[branch][bits] = count
    return out


def histogram_csv(hist: Mapping[str, int]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bitstring", "count"])
    for bits in sorted(hist):
        writer.writerow([bits, hist[bits]])
    return buf.getvalue()


@dataclass
class PartitionReport:
    """Outcome of :func:`verify_partition`; example lists hold at most
    ``EXAMPLE_LIMIT`` entries, the counts are exact."""

    ok: bool
    missing: list[tuple[int, ...]] = field(default_factory=list)
    duplicates: list[tuple[tuple[int, ...], list[str]]] = field(default_factory=list)
    out_of_range: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    def __str__(self) -> str:
        if self.ok:
            return "PASS"
        lines = ["FAIL " + ", ".join(f"{k}={v}" for k, v in self.counts.items() if v)]
        lines += [f"  missing {v}" for v in self.missing[:10]]
        lines += [f"  duplicate {v} in {bs}" for v, bs in self.duplicates[:10]]
        lines += [f"  out of range {v} in {b}" for b, v in self.out_of_range[:10]]
        return "\n".join(lines)


EXAMPLE_LIMIT = 100


def verify_partition(p: Partition, layout: Optional[VariableLayout] = None) -> PartitionReport:
    """Check that the subsets are disjoint, in range and cover the space."""
    widths = p.widths
    if layout is not None:
        widths = tuple(len(layout.variables[v]) for v in p.variables)
    limits = np.array([1 << w for w in widths], dtype=np.int64)
    out_of_range, keys, owners = [], [], []
    n_bad = 0
    branch_ids = list(p.arrays)
    for k, (branch, rows) in enumerate(p.arrays.items()):
        bad = ((rows < 0) | (rows >= limits)).any(axis=1) if len(rows) else np.zeros(0, bool)
        n_bad += int(bad.sum())
        out_of_range += [(branch, tuple(r)) for r in rows[bad][:EXAMPLE_LIMIT].tolist()]
        keys.append(row_keys(rows[~bad], widths))
        owners.append(np.full(int((~bad).sum()), k))
    keys = np.concatenate(keys) if keys else np.zeros(0, np.int64)
    owners = np.concatenate(owners) if owners else np.zeros(0, np.int64)
    counts = np.bincount(keys, minlength=1 << sum(widths))
    missing_keys = np.flatnonzero(counts == 0)
    dup_keys = np.flatnonzero(counts > 1)
    missing = [tuple(r) for r in key_rows(missing_keys[:EXAMPLE_LIMIT], widths).tolist()]
    duplicates = []
    for key, row in zip(dup_keys[:EXAMPLE_LIMIT].tolist(),
                        key_rows(dup_keys[:EXAMPLE_LIMIT], widths).tolist()):
        duplicates.append((tuple(row), [branch_ids[o] for o in owners[keys == key]]))
    tally = {"missing": len(missing_keys), "duplicates": len(dup_keys), "out_of_range": n_bad}
    ok = not any(tally.values())
    return PartitionReport(ok, missing, duplicates, out_of_range, tally)
