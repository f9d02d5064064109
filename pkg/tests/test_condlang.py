import numpy as np
import pytest
from hypothesis import given, strategies as st

from qse.condlang import (Add, And, Const, If, Leaf, Mul, Not, Or, ParseError, Rel,
                          Var, collect_paths, condition_nodes, count_conditions,
                          expr_width, format_program, leaves, parse_program,
                          strip_not, with_widths)
from qse.harness.generate import random_program

from conftest import FIG1


def test_fig1_structure(fig1_tree):
    assert fig1_tree.leaf_ids() == ["A", "B", "C", "D"]
    assert fig1_tree.widths == {"x": 3, "y": 2}
    assert fig1_tree.n_qubits == 5
    root = fig1_tree.root
    assert root.cond == Rel(Add(Var("x"), Var("y")), "<", Const(4))
    assert root.then.cond == Rel(Var("x"), ">", Var("y"))
    assert root.orelse.cond == Rel(Var("y"), ">", Const(1))


def test_one_line_source_matches_multiline(fig1_tree):
    src = "var x:3; var y:2; if (x+y<4) { if (x>y) {A} else {B} } else { if (y>1) {C} else {D} }"
    assert parse_program(src) == fig1_tree


def test_minimal_two_branch():
    tree = parse_program("var a:1; if (a==0) {L} else {R}")
    assert tree.leaf_ids() == ["L", "R"]


def test_contradiction_parses():
    tree = parse_program("var a:2; if (a<1 && a>2) {L} else {R}")
    assert isinstance(tree.root.cond, And)


def test_single_leaf_program():
    tree = parse_program("var a:2; {ONLY}")
    assert tree.root == Leaf("ONLY")
    assert [pc.conjuncts for pc in collect_paths(tree)] == [()]
    assert count_conditions(tree) == 0


def test_precedence():
    tree = parse_program("var a:2; var b:2; if (a + b * 2 < 3 || !a == b && a != 1) {L} else {R}")
    c = tree.root.cond
    assert isinstance(c, Or)
    assert c.lhs == Rel(Add(Var("a"), Mul(Var("b"), Const(2))), "<", Const(3))
    assert isinstance(c.rhs, And)
    assert c.rhs.lhs == Not(Rel(Var("a"), "==", Var("b")))


def test_parenthesised_arith_and_cond():
    tree = parse_program("var a:2; if ((a + 1) * 2 > 3 && (a < 2 || a > 2)) {L} else {R}")
    c = tree.root.cond
    assert c.lhs.lhs == Mul(Add(Var("a"), Const(1)), Const(2))
    assert isinstance(c.rhs, Or)


def test_comments_and_blocks():
    src = "// header\nvar a:1; # note\nif (a == 1) { { L } } else { R }"
    assert parse_program(src).leaf_ids() == ["L", "R"]


@pytest.mark.parametrize("src, fragment", [
    ("var a:2; if (b < 1) {L} else {R}", "undeclared variable 'b'"),
    ("var a:0; {L}", "width"),
    ("var a:1; var a:2; {L}", "duplicate"),
    ("var a:1; if (a < 1) {L} else {L}", "duplicate"),
    ("var a:1; if (a < 1) {L}", "else"),
    ("var a:1; if (a) {L} else {R}", ""),
    ("var a:1; if (a < 1) {L} else {R} extra", ""),
    ("var a:1; if (a $ 1) {L} else {R}", ""),
])
def test_parse_errors(src, fragment):
    with pytest.raises(ParseError) as exc:
        parse_program(src)
    assert fragment in str(exc.value)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_program("var a:1;\nif (a < ) {L} else {R}")
    assert exc.value.line == 2
    assert exc.value.col == 9


def test_collect_paths_fig1(fig1_tree):
    paths = collect_paths(fig1_tree)
    c0 = fig1_tree.root.cond
    c1, c2 = fig1_tree.root.then.cond, fig1_tree.root.orelse.cond
    assert [p.branch_id for p in paths] == ["A", "B", "C", "D"]
    assert [p.conjuncts for p in paths] == [
        ((c0, True), (c1, True)), ((c0, True), (c1, False)),
        ((c0, False), (c2, True)), ((c0, False), (c2, False))]


def _full_tree(depth, counter):
    if depth == 0:
        counter[0] += 1
        return f"{{L{counter[0]}}}"
    k = counter[0]
    return (f"if (a < {k % 4}) {_full_tree(depth - 1, counter)} "
            f"else {_full_tree(depth - 1, counter)}")


def test_depth3_paths():
    tree = parse_program("var a:2; " + _full_tree(3, [0]))
    paths = collect_paths(tree)
    assert len(paths) == 8
    assert all(len(p.conjuncts) == 3 for p in paths)


def test_count_conditions():
    assert count_conditions(parse_program(FIG1)) == 3
    assert count_conditions(parse_program("var a:1; var b:1; var c:1; var d:1; "
                                          "if (a<b || c==d) {T} else {E}")) == 3
    # negation is free
    assert count_conditions(parse_program("var a:2; if (!(a<1)) {T} else {E}")) == 1
    # a recurring condition is one division
    src = "var a:2; if (a<1) { if (a<1) {P} else {Q} } else { if (!(a<1)) {R} else {S} }"
    assert count_conditions(parse_program(src)) == 1


def test_strip_not_and_nodes():
    r = Rel(Var("a"), "<", Const(1))
    assert strip_not(Not(Not(r))) == (r, True)
    assert strip_not(Not(r)) == (r, False)
    c = Or(Not(r), And(r, Rel(Var("a"), "==", Const(0))))
    kinds = [type(n).__name__ for n in condition_nodes(c)]
    assert kinds == ["Rel", "Rel", "Rel", "And", "Or"]


def test_expr_width():
    w = {"x": 3, "y": 2}
    assert expr_width(Var("x"), w) == 3
    assert expr_width(Const(0), w) == 1
    assert expr_width(Const(20), w) == 5
    assert expr_width(Add(Var("x"), Var("y")), w) == 4
    assert expr_width(Mul(Var("x"), Var("y")), w) == 5


def test_with_widths(fig1_tree):
    assert with_widths(fig1_tree, 4).widths == {"x": 4, "y": 4}
    assert with_widths(fig1_tree, {"y": 1}).widths == {"x": 3, "y": 1}
    assert with_widths(fig1_tree, 4).root is fig1_tree.root


def _count_nodes(c):
    if isinstance(c, Not):
        return _count_nodes(c.inner)
    if isinstance(c, (And, Or)):
        return 1 + _count_nodes(c.lhs) + _count_nodes(c.rhs)
    return 1


def _flat(c):
    c, _ = strip_not(c)
    out = [c]
    if isinstance(c, (And, Or)):
        out += _flat(c.lhs) + _flat(c.rhs)
    return out


def _all_nodes(node):
    if isinstance(node, If):
        yield node.cond
        yield from _all_nodes(node.then)
        yield from _all_nodes(node.orelse)


@given(st.integers(0, 2**32 - 1))
def test_roundtrip_and_counts(seed):
    tree = random_program(np.random.default_rng(seed), max_qubits=26)
    again = parse_program(format_program(tree))
    assert again == tree
    paths = collect_paths(tree)
    assert len(paths) == len(list(leaves(tree.root)))
    conds = list(_all_nodes(tree.root))
    total = sum(_count_nodes(c) for c in conds)
    assert count_conditions(tree) <= total
    flat = [n for c in conds for n in _flat(c)]
    if len(set(flat)) == len(flat):
        assert count_conditions(tree) == total
