"""Oracle, corpus, coverage sweep, random programs and the CLI."""
from .corpus import (CorpusProgram, DivisionRow, division_count_report,
                     format_division_table, load_corpus, load_manifest)
from .generate import RELOPS, negate_root, random_program
from .oracle import (ORACLE_CEILING, Comparison, brute_force_partition,
                     compare_partitions, evaluate_arith, evaluate_cond)
from .sweep import QUANTUM_LIMIT, CoverageCurve, coverage_at, coverage_sweep, partition_at

__all__ = [
    "CorpusProgram", "DivisionRow", "division_count_report", "format_division_table",
    "load_corpus", "load_manifest", "RELOPS", "negate_root", "random_program",
    "ORACLE_CEILING", "Comparison", "brute_force_partition", "compare_partitions",
    "evaluate_arith", "evaluate_cond", "QUANTUM_LIMIT", "CoverageCurve", "coverage_at",
    "coverage_sweep", "partition_at",
]
