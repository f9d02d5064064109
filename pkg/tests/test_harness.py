import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qse.condlang import (And, Mul, Not, Or, collect_paths, count_conditions,
                          iter_conditions, parse_program, strip_not)
from qse.harness import (CorpusProgram, brute_force_partition, compare_partitions,
                         coverage_at, coverage_sweep, division_count_report,
                         format_division_table, load_corpus, load_manifest,
                         negate_root, partition_at, random_program)
from qse.partition import Partition, run_and_extract, verify_partition
from qse.qsynth import compile_qse, plan_layout

from conftest import FIG1, FIG1_SUBSETS


# -- oracle ----------------------------------------------------------------

def test_oracle_fig1(fig1_tree):
    p = brute_force_partition(fig1_tree)
    assert {b: p.values(b) for b in "ABCD"} == FIG1_SUBSETS
    assert verify_partition(p).ok


def test_oracle_contradiction():
    p = brute_force_partition(parse_program("var a:3; if (a != a) {T} else {E}"))
    assert p.sizes() == {"T": 0, "E": 8}


def test_oracle_exact_arithmetic():
    # 15 * 15 + 15 does not fit four bits; the oracle must not wrap
    p = brute_force_partition(parse_program("var a:4; if (a * a + a > 200) {T} else {E}"))
    assert p.values("T") == {(14,), (15,)}


def test_oracle_ceiling():
    with pytest.raises(ValueError, match="ceiling"):
        brute_force_partition(parse_program("var a:13; var b:12; {L}"))


def test_oracle_single_leaf():
    assert brute_force_partition(parse_program("var a:2; var b:1; {L}")).sizes() == {"L": 8}


def test_compare_identical(fig1_partition):
    report = compare_partitions(fig1_partition, fig1_partition)
    assert report.passed and report.counterexamples == []
    assert str(report) == "PASS"


def test_compare_moved_element(fig1_partition):
    subsets = {b: [tc.values for tc in s] for b, s in fig1_partition.subsets.items()}
    subsets["A"].remove((2, 1))
    subsets["D"].append((2, 1))
    moved = Partition.from_values(("x", "y"), (3, 2), subsets)
    report = compare_partitions(moved, fig1_partition)
    assert report.verdict == "FAIL"
    assert {b: r.tolist() for b, r in report.only_classical.items()} == {"A": [[2, 1]]}
    assert {b: r.tolist() for b, r in report.only_quantum.items()} == {"D": [[2, 1]]}
    assert "A: (x=2, y=1) only in classical" in report.counterexamples


def test_compare_limits_counterexamples(fig1_partition):
    swapped = Partition.from_values(("x", "y"), (3, 2), {
        "A": FIG1_SUBSETS["C"], "B": FIG1_SUBSETS["D"],
        "C": FIG1_SUBSETS["A"], "D": FIG1_SUBSETS["B"]})
    assert len(compare_partitions(swapped, fig1_partition).counterexamples) == 10


def test_compare_branch_mismatch(fig1_partition):
    other = Partition.from_values(("x", "y"), (3, 2), {"A": [], "Z": []})
    with pytest.raises(ValueError, match="branch ids"):
        compare_partitions(fig1_partition, other)


def test_fig1_quantum_vs_classical(fig1_tree, fig1_partition):
    assert compare_partitions(fig1_partition, brute_force_partition(fig1_tree)).passed


# -- corpus ----------------------------------------------------------------

CORPUS = load_corpus()


def test_corpus_contents():
    assert [p.name for p in CORPUS] == ["dart", "power", "stat", "tcas", "early",
                                        "basic00181", "snp3-ok", "CWE789"]
    assert sum(p.sweep for p in CORPUS) == 3
    assert all(p.notes for p in CORPUS)


@pytest.mark.parametrize("prog", CORPUS, ids=lambda p: p.name)
def test_corpus_program_structure(prog):
    tree = prog.tree
    assert max(d.width for d in tree.decls) <= 4
    divisions, paths = count_conditions(tree), len(collect_paths(tree))
    assert divisions <= paths
    assert divisions == prog.expected_division_count
    if prog.name != "snp3-ok":
        assert paths == prog.expected_path_count


def test_snp3_path_count_is_structurally_two():
    (prog,) = [p for p in CORPUS if p.name == "snp3-ok"]
    assert len(collect_paths(prog.tree)) == 2
    assert prog.expected_path_count == 1


@pytest.mark.parametrize("prog", CORPUS, ids=lambda p: p.name)
def test_corpus_quantum_equals_oracle(prog):
    tree = prog.tree
    quantum = run_and_extract(compile_qse(tree))
    assert compare_partitions(quantum, brute_force_partition(tree)).passed
    assert verify_partition(quantum).ok


def test_negative_expected_count_rejected():
    with pytest.raises(ValueError):
        CorpusProgram("bad", "var a:1; {L}", -1, 1)


def test_manifest_roundtrip(tmp_path):
    (tmp_path / "one.qse").write_text("var a:1; if (a == 1) {T} else {E}")
    (tmp_path / "m.json").write_text(json.dumps({"programs": [
        {"name": "one", "path": "one.qse", "expected_division_count": 1,
         "expected_path_count": 2}]}))
    (prog,) = load_manifest(tmp_path / "m.json")
    assert prog.name == "one" and not prog.sweep


def test_division_report():
    rows = {r.name: r for r in division_count_report(CORPUS)}
    assert (rows["dart"].paths, rows["dart"].divisions) == (4, 3)
    assert (rows["early"].paths, rows["early"].divisions) == (2, 1)
    assert (rows["power"].paths, rows["power"].divisions) == (11, 7)
    assert not rows["snp3-ok"].matches
    single = CorpusProgram("one", "var a:2; if (a < 2) {T} else {E}", 1, 2)
    (row,) = division_count_report([single])
    assert (row.paths, row.divisions, row.matches) == (2, 1, True)
    table = format_division_table(rows.values())
    assert table.splitlines()[0].split() == ["program", "paths", "divisions", "expected", "match"]


# -- coverage sweep --------------------------------------------------------

def test_sweep_needs_four_bits():
    tree = parse_program("var x:1; if (x < 9) { if (x < 3) {LOW} else {MID} } else {HIGH}")
    curve = coverage_sweep(tree, 5)
    assert curve.curve[3] < 1.0
    assert all(curve.curve[w] == 1.0 for w in (4, 5))
    assert curve.minimal_width == 4
    assert curve.is_monotone()


def test_fig1_full_coverage(fig1_tree):
    assert coverage_at(fig1_tree, {"x": 3, "y": 2}) == 1.0
    assert coverage_at(fig1_tree, {"x": 3, "y": 2}, method="quantum") == 1.0


def test_one_bit_cannot_cover_four_branches():
    tree = parse_program("var a:2; if (a < 2) { if (a < 1) {P} else {Q} } "
                         "else { if (a < 3) {R} else {S} }")
    assert coverage_at(tree, 1) <= 0.5


def test_sweep_reports_no_full_coverage():
    tree = parse_program("var a:1; if (a > 100) {T} else {E}")
    curve = coverage_sweep(tree, 3)
    assert curve.minimal_width is None
    assert "none in range" in str(curve)


def test_sweep_methods_agree():
    tree = parse_program("var a:1; var b:1; if (a + b > 4) {T} else {E}")
    q = coverage_sweep(tree, 3, method="quantum")
    o = coverage_sweep(tree, 3, method="oracle")
    assert q.curve == o.curve
    assert set(q.methods.values()) == {"quantum"}
    with pytest.raises(ValueError):
        partition_at(tree, 2, method="magic")


def test_sweep_skips_oversized_widths():
    tree = parse_program("var a:1; var b:1; if (a * b > 4) {T} else {E}")
    curve = coverage_sweep(tree, 13, min_width=12, method="oracle")
    assert 13 in curve.skipped and curve.curve[12] == 1.0


def test_oracle_at_ceiling():
    p = brute_force_partition(parse_program("var a:12; var b:12; if (a < b) {T} else {E}"))
    assert p.sizes() == {"T": (4096 * 4095) // 2, "E": (4096 * 4097) // 2}
    assert verify_partition(p).ok


@given(st.integers(0, 2**32 - 1), st.integers(0, 2))
def test_coverage_monotone_per_variable(seed, which):
    rng = np.random.default_rng(seed)
    tree = random_program(rng, max_depth=2, max_s_width=6, max_qubits=26)
    name = tree.names[which % len(tree.names)]
    base = {n: 1 for n in tree.names}
    values = []
    for w in (1, 2, 3):
        values.append(coverage_at(tree, {**base, name: w}, method="oracle"))
    assert values == sorted(values)


# -- random programs -------------------------------------------------------

def _depth(node):
    if not hasattr(node, "cond"):
        return 0
    return 1 + max(_depth(node.then), _depth(node.orelse))


@given(st.integers(0, 2**32 - 1))
def test_random_program_bounds(seed):
    tree = random_program(np.random.default_rng(seed), max_depth=3, max_s_width=10,
                          max_qubits=20)
    assert _depth(tree.root) <= 3
    assert tree.n_qubits <= 10
    assert plan_layout(tree).num_qubits <= 20


def test_random_programs_use_every_operator():
    rng = np.random.default_rng(0)
    seen = set()
    for _ in range(100):
        tree = random_program(rng)
        for node, _ in iter_conditions(tree.root):
            stack = [node.cond]
            while stack:
                c = stack.pop()
                seen.add(type(c).__name__ if not hasattr(c, "op") else c.op)
                if isinstance(c, Not):
                    stack.append(c.inner)
                elif isinstance(c, (And, Or)):
                    stack += [c.lhs, c.rhs]
                else:
                    seen.update(type(e).__name__ for e in (c.lhs, c.rhs))
    assert {"<", "<=", ">", ">=", "==", "!=", "And", "Or", "Not", "Add", "Mul"} <= seen


def test_negate_root():
    tree = parse_program(FIG1)
    swapped = negate_root(tree)
    assert swapped.root.cond == Not(tree.root.cond)
    assert swapped.root.then == tree.root.orelse
    kept = negate_root(tree, swap=False)
    assert kept.root.then == tree.root.then
    with pytest.raises(ValueError):
        negate_root(parse_program("var a:1; {L}"))
