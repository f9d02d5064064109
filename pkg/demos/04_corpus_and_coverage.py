"""
Benchmark corpus and register width
===================================

Eight small re-encoded benchmark programs: path and division counts, an
end-to-end check against brute force, and branch coverage as the variable
width grows.
"""
import time

from qse.harness import (brute_force_partition, compare_partitions, coverage_sweep,
                         division_count_report, format_division_table, load_corpus)
from qse.partition import run_and_extract
from qse.qsynth import compile_qse

corpus = load_corpus()
print(format_division_table(division_count_report(corpus)))

for prog in corpus:
    t0 = time.perf_counter()
    circuit = compile_qse(prog.tree)
    verdict = compare_partitions(run_and_extract(circuit), brute_force_partition(prog.tree))
    print(f"{prog.name:<11} {circuit.num_qubits:>2} qubits  {verdict.verdict}  "
          f"{time.perf_counter() - t0:.2f}s")

# Too few bits leave some branches without a single test case
for prog in (p for p in corpus if p.sweep):
    curve = coverage_sweep(prog.tree, 6)
    print(prog.name, {w: round(c, 2) for w, c in curve.curve.items()},
          "-> smallest full-coverage width", curve.minimal_width)
