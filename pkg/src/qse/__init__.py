"""Quantum symbolic execution on a dense statevector simulator.

A small condition language is compiled into a circuit that puts every input
assignment into superposition and entangles it with flag qubits naming the
branch it reaches.  One simulation run therefore partitions the whole input
space by branch.

    >>> from qse import parse_program, compile_qse, run_and_extract
    >>> tree = parse_program("var x:2; if (x > 1) {BIG} else {SMALL}")
    >>> part = run_and_extract(compile_qse(tree))
    >>> part.sizes()
    {'BIG': 2, 'SMALL': 2}
"""
from .condlang import (BranchTree, ParseError, collect_paths, count_conditions,
                       format_program, parse_program, with_widths)
from .partition import (Partition, TestCase, run_and_extract, sample_histogram,
                        verify_partition)
from .qsynth import LayoutError, QseCircuit, compile_qse, plan_layout

__all__ = [
    "BranchTree", "ParseError", "collect_paths", "count_conditions", "format_program",
    "parse_program", "with_widths", "Partition", "TestCase", "run_and_extract",
    "sample_histogram", "verify_partition", "LayoutError", "QseCircuit",
    "compile_qse", "plan_layout",
]

__version__ = "0.1.0"
