"""Condition language: a tiny DSL for branch trees over unsigned integer inputs.

A program declares its input variables with a bit width and then nests
``if``/``else`` blocks down to named leaves::

    var x:3; var y:2;
    if (x+y < 4) {
        if (x > y) {A} else {B}
    } else {
        if (y > 1) {C} else {D}
    }

Only ``+`` and ``*`` are available on the arithmetic side, the six
relational operators compare two arithmetic expressions, and conditions
combine with ``&&``, ``||`` and ``!``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "ParseError", "VarDecl", "Var", "Const", "Add", "Mul", "Rel", "And", "Or",
    "Not", "Leaf", "If", "BranchTree", "PathConstraint", "RELOPS",
    "parse_program", "collect_paths", "count_conditions", "format_program",
    "format_cond", "format_arith", "iter_conditions", "condition_nodes",
    "strip_not", "leaves", "expr_width", "with_widths",
]

RELOPS = ("<", "<=", ">", ">=", "==", "!=")


class ParseError(ValueError):
    """Raised on malformed or ill-typed DSL source."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


# -- arithmetic ------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Add:
    lhs: "ArithExpr"
    rhs: "ArithExpr"


@dataclass(frozen=True)
class Mul:
    lhs: "ArithExpr"
    rhs: "ArithExpr"


ArithExpr = Union[Var, Const, Add, Mul]


# -- conditions ------------------------------------------------------------

@dataclass(frozen=True)
class Rel:
    lhs: ArithExpr
    op: str
    rhs: ArithExpr

    def __post_init__(self):
        if self.op not in RELOPS:
            raise ValueError(f"unknown relational operator {self.op!r}")


@dataclass(frozen=True)
class And:
    lhs: "CondExpr"
    rhs: "CondExpr"


@dataclass(frozen=True)
class Or:
    lhs: "CondExpr"
    rhs: "CondExpr"


@dataclass(frozen=True)
class Not:
    inner: "CondExpr"


CondExpr = Union[Rel, And, Or, Not]


# -- trees -----------------------------------------------------------------

@dataclass(frozen=True)
class VarDecl:
    name: str
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"variable {self.name!r} must have width >= 1")


@dataclass(frozen=True)
class Leaf:
    branch_id: str


@dataclass(frozen=True)
class If:
    cond: CondExpr
    then: "Node"
    orelse: "Node"


Node = Union[Leaf, If]


@dataclass(frozen=True)
class BranchTree:
    decls: tuple[VarDecl, ...]
    root: Node

    @property
    def widths(self) -> dict[str, int]:
        return {d.name: d.width for d in self.decls}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.decls)

    @property
    def n_qubits(self) -> int:
        return sum(d.width for d in self.decls)

    def leaf_ids(self) -> list[str]:
        return [leaf.branch_id for leaf in leaves(self.root)]

    def __str__(self) -> str:
        return format_program(self)


@dataclass(frozen=True)
class PathConstraint:
    """Conjunction of conditions, with polarities, that leads to one leaf."""

    branch_id: str
    conjuncts: tuple[tuple[CondExpr, bool], ...]

    def __str__(self) -> str:
        if not self.conjuncts:
            return "true"
        parts = [format_cond(c) if pol else f"!({format_cond(c)})"
                 for c, pol in self.conjuncts]
        return " && ".join(parts)


# -- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|==|!=|&&|\|\||[<>!+*(){};:])
""", re.VERBOSE)

_KEYWORDS = {"var", "if", "else"}


@dataclass(frozen=True)
class _Token:
    kind: str       # "int", "ident", "kw", "op", "eof"
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident" and text in _KEYWORDS:
            tokens.append(_Token("kw", text, line, col))
        elif kind in ("int", "ident", "op"):
            tokens.append(_Token(kind, text, line, col))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0
        self.decls: dict[str, VarDecl] = {}
        self.leaf_ids: set[str] = set()

    @property
    def tok(self) -> _Token:
        return self.toks[self.i]

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def expect(self, text: str) -> _Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self) -> _Token:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            raise self.error(f"expected identifier, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def program(self) -> BranchTree:
        while self.at("var"):
            self.decl()
        root = self.tree()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after program")
        return BranchTree(tuple(self.decls.values()), root)

    def decl(self) -> None:
        self.expect("var")
        name = self.ident()
        self.expect(":")
        if self.tok.kind != "int":
            raise self.error("expected integer width")
        width_tok = self.tok
        self.i += 1
        self.expect(";")
        width = int(width_tok.text)
        if width == 0:
            raise self.error(f"variable {name.text!r} has width 0", width_tok)
        if name.text in self.decls:
            raise self.error(f"duplicate declaration of {name.text!r}", name)
        self.decls[name.text] = VarDecl(name.text, width)

    def tree(self) -> Node:
        if self.at("if"):
            self.expect("if")
            self.expect("(")
            cond = self.cond()
            self.expect(")")
            then = self.tree()
            self.expect("else")
            orelse = self.tree()
            return If(cond, then, orelse)
        self.expect("{")
        if self.tok.kind == "ident":
            name = self.ident()
            if name.text in self.leaf_ids:
                raise self.error(f"duplicate branch id {name.text!r}", name)
            self.leaf_ids.add(name.text)
            node: Node = Leaf(name.text)
        else:
            node = self.tree()
        self.expect("}")
        return node

    def cond(self) -> CondExpr:
        node = self.conj()
        while self.at("||"):
            self.i += 1
            node = Or(node, self.conj())
        return node

    def conj(self) -> CondExpr:
        node = self.neg()
        while self.at("&&"):
            self.i += 1
            node = And(node, self.neg())
        return node

    def neg(self) -> CondExpr:
        if self.at("!"):
            self.i += 1
            return Not(self.neg())
        if self.at("("):
            # "(" opens either a grouped condition or a grouped arithmetic
            # operand of a relation; try the relation first and backtrack.
            mark = self.i
            try:
                return self.rel()
            except ParseError:
                self.i = mark
            self.expect("(")
            node = self.cond()
            self.expect(")")
            return node
        return self.rel()

    def rel(self) -> Rel:
        lhs = self.arith()
        if self.tok.kind != "op" or self.tok.text not in RELOPS:
            raise self.error("expected relational operator")
        op = self.tok.text
        self.i += 1
        return Rel(lhs, op, self.arith())

    def arith(self) -> ArithExpr:
        node = self.term()
        while self.at("+"):
            self.i += 1
            node = Add(node, self.term())
        return node

    def term(self) -> ArithExpr:
        node = self.atom()
        while self.at("*"):
            self.i += 1
            node = Mul(node, self.atom())
        return node

    def atom(self) -> ArithExpr:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Const(int(tok.text))
        if tok.kind == "ident":
            self.i += 1
            if tok.text not in self.decls:
                raise self.error(f"undeclared variable {tok.text!r}", tok)
            return Var(tok.text)
        if self.at("("):
            self.i += 1
            node = self.arith()
            self.expect(")")
            return node
        raise self.error(f"unexpected {tok.text or 'end of input'!r} in expression")


def parse_program(source: str) -> BranchTree:
    """Parse DSL source into a :class:`BranchTree`.

    Raises :class:`ParseError` (with ``line``/``col``) on syntax errors,
    undeclared variables, zero widths and duplicate declarations.
    """
    return _Parser(source).program()


# -- printing --------------------------------------------------------------

def format_arith(e: ArithExpr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return str(e.value)
    op = "+" if isinstance(e, Add) else "*"
    return f"({format_arith(e.lhs)} {op} {format_arith(e.rhs)})"


def format_cond(c: CondExpr) -> str:
    if isinstance(c, Rel):
        return f"{format_arith(c.lhs)} {c.op} {format_arith(c.rhs)}"
    if isinstance(c, Not):
        return f"!({format_cond(c.inner)})"
    op = "&&" if isinstance(c, And) else "||"
    return f"({format_cond(c.lhs)}) {op} ({format_cond(c.rhs)})"


def _format_node(node: Node, indent: int) -> list[str]:
    pad = "    " * indent
    if isinstance(node, Leaf):
        return [pad + "{" + node.branch_id + "}"]
    lines = [pad + f"if ({format_cond(node.cond)}) {{"]
    lines += _format_node(node.then, indent + 1)
    lines.append(pad + "} else {")
    lines += _format_node(node.orelse, indent + 1)
    lines.append(pad + "}")
    return lines


def format_program(tree: BranchTree) -> str:
    """Render a tree back to DSL source; ``parse_program`` inverts this."""
    decls = " ".join(f"var {d.name}:{d.width};" for d in tree.decls)
    body = "\n".join(_format_node(tree.root, 0))
    return f"{decls}\n{body}\n" if decls else body + "\n"


# -- traversal -------------------------------------------------------------

def leaves(node: Node) -> Iterator[Leaf]:
    if isinstance(node, Leaf):
        yield node
    else:
        yield from leaves(node.then)
        yield from leaves(node.orelse)


def iter_conditions(node: Node) -> Iterator[tuple[If, int]]:
    """Yield every ``If`` node with its depth, root first, then-before-else."""
    stack = [(node, 0)]
    while stack:
        n, depth = stack.pop()
        if isinstance(n, If):
            yield n, depth
            stack.append((n.orelse, depth + 1))
            stack.append((n.then, depth + 1))


def strip_not(c: CondExpr) -> tuple[CondExpr, bool]:
    """Peel leading negations; returns (inner, polarity)."""
    polarity = True
    while isinstance(c, Not):
        c = c.inner
        polarity = not polarity
    return c, polarity


def condition_nodes(c: CondExpr) -> Iterator[CondExpr]:
    """Rel/And/Or nodes of a condition in post-order (operands first)."""
    c, _ = strip_not(c)
    if isinstance(c, (And, Or)):
        yield from condition_nodes(c.lhs)
        yield from condition_nodes(c.rhs)
    yield c


def collect_paths(tree: BranchTree) -> list[PathConstraint]:
    """One path constraint per leaf, in then-before-else leaf order."""
    out: list[PathConstraint] = []

    def walk(node: Node, pc: tuple[tuple[CondExpr, bool], ...]) -> None:
        if isinstance(node, Leaf):
            out.append(PathConstraint(node.branch_id, pc))
            return
        walk(node.then, pc + ((node.cond, True),))
        walk(node.orelse, pc + ((node.cond, False),))

    walk(tree.root, ())
    return out


def count_conditions(tree: BranchTree) -> int:
    """Number of subspace divisions the synthesizer materializes.

    Each distinct Rel, And and Or node is one flag-writing circuit. ``!`` is
    free, and a condition that recurs (possibly negated) anywhere in the tree
    is evaluated once and its flags reused.
    """
    seen = set()
    for node, _ in iter_conditions(tree.root):
        seen.update(condition_nodes(node.cond))
    return len(seen)


def expr_width(e: ArithExpr, widths: dict[str, int]) -> int:
    """Bits needed to hold ``e`` exactly for every input assignment."""
    if isinstance(e, Var):
        return widths[e.name]
    if isinstance(e, Const):
        return max(1, e.value.bit_length())
    lw, rw = expr_width(e.lhs, widths), expr_width(e.rhs, widths)
    if isinstance(e, Add):
        return max(lw, rw) + 1
    return lw + rw


def with_widths(tree: BranchTree, widths: dict[str, int] | int) -> BranchTree:
    """Same tree with redeclared variable widths (an int sets all of them)."""
    if isinstance(widths, int):
        widths = {d.name: widths for d in tree.decls}
    decls = tuple(VarDecl(d.name, widths.get(d.name, d.width)) for d in tree.decls)
    return BranchTree(decls, tree.root)
