"""
Partitioning a two-variable program
===================================

Four branches, 32 test cases.  One simulation of the compiled circuit
labels every input with the branch it reaches.
"""
from pathlib import Path

from qse import compile_qse, parse_program, run_and_extract
from qse.partition import group_by_branch, sample_histogram, simulate

source = (Path(__file__).parent / "fig1.qse").read_text()
tree = parse_program(source)
print(tree)

# Layout: |s> first, then flags, scratch and ancillae
circuit = compile_qse(tree)
print(circuit.layout.breakdown())
print(f"{len(circuit.body)} gates after the Hadamard layer")

# Flag patterns, most significant flag first; * means "don't care"
print(circuit.dictionary.to_text())

state = simulate(circuit)
partition = run_and_extract(circuit, state)
for branch, cases in partition.subsets.items():
    print(branch, len(cases), " ".join(str(tc) for tc in cases))

# A sampled readout, as a device would return it
hist = sample_histogram(circuit, shots=8192, seed=7, state=state)
print(f"{len(hist)} distinct outcomes, counts {min(hist.values())}..{max(hist.values())}")
for branch, sub in group_by_branch(hist, circuit).items():
    print(branch, sum(sub.values()), "shots")
