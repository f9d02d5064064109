"""Branch coverage as a function of variable bit-width."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from ..condlang import BranchTree, with_widths
from ..partition import Partition, run_and_extract
from ..qsynth import LayoutError, compile_qse, plan_layout
from .oracle import ORACLE_CEILING, brute_force_partition

__all__ = ["QUANTUM_LIMIT", "CoverageCurve", "partition_at", "coverage_at", "coverage_sweep"]

# "auto" simulates up to this many qubits and falls back to the oracle above it
QUANTUM_LIMIT = 22

METHODS = ("auto", "quantum", "oracle")


@dataclass
class CoverageCurve:
    curve: dict[int, float]
    minimal_width: Optional[int]
    methods: dict[int, str] = field(default_factory=dict)
    skipped: dict[int, str] = field(default_factory=dict)

    def is_monotone(self) -> bool:
        ys = [self.curve[w] for w in sorted(self.curve)]
        return all(a <= b for a, b in zip(ys, ys[1:]))

    def __str__(self) -> str:
        lines = ["width,coverage,method"]
        lines += [f"{w},{self.curve[w]:.4f},{self.methods.get(w, '')}" for w in sorted(self.curve)]
        lines += [f"{w},,skipped: {why}" for w, why in sorted(self.skipped.items())]
        best = self.minimal_width
        lines.append(f"minimal full-coverage width: {best if best is not None else 'none in range'}")
        return "\n".join(lines) + "\n"


def partition_at(tree: BranchTree, widths: Union[int, Mapping[str, int]],
                 method: str = "auto", quantum_limit: int = QUANTUM_LIMIT
                 ) -> tuple[Partition, str]:
    """Partition ``tree`` re-declared at ``widths``; returns (partition, method used)."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    t = with_widths(tree, widths)
    if method != "oracle":
        try:
            layout = plan_layout(t, ceiling=quantum_limit if method == "auto" else 26)
        except LayoutError:
            if method == "quantum":
                raise
        else:
            return run_and_extract(compile_qse(t, layout)), "quantum"
    return brute_force_partition(t), "oracle"


def coverage_at(tree: BranchTree, widths: Union[int, Mapping[str, int]],
                method: str = "auto") -> float:
    return partition_at(tree, widths, method)[0].covered_fraction()


def coverage_sweep(tree: BranchTree, max_width: int, method: str = "auto",
                   min_width: int = 1, quantum_limit: int = QUANTUM_LIMIT) -> CoverageCurve:
    """Coverage for every uniform width ``min_width..max_width``.

    Widths whose program fits neither the simulator nor the oracle are
    recorded in ``skipped``.  ``minimal_width`` is the smallest width with
    full coverage, or None.
    """
    if max_width < min_width or min_width < 1:
        raise ValueError("need 1 <= min_width <= max_width")
    curve, methods, skipped = {}, {}, {}
    for w in range(min_width, max_width + 1):
        try:
            part, used = partition_at(tree, w, method, quantum_limit)
        except (LayoutError, ValueError, MemoryError) as exc:
            skipped[w] = str(exc)
            continue
        curve[w] = part.covered_fraction()
        methods[w] = used
    best = next((w for w in sorted(curve) if curve[w] == 1.0), None)
    return CoverageCurve(curve, best, methods, skipped)
