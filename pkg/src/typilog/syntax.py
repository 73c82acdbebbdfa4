"""Textual language for concepts, graded axioms and weighted knowledge bases.

Grammar (ASCII, newline-insensitive, ``#`` starts a line comment)::

    document   := (block | axiom)*
    block      := NAME '{' winc* '}'
    winc       := 'T' '(' NAME ')' '<:' concept '@' NUMBER
    axiom      := concept '<:' concept CMP threshold
                | concept '(' NAME ')' CMP threshold          # concept assertion
                | NAME '(' NAME ',' NAME ')' CMP threshold    # role assertion
    concept    := and_expr ('or' and_expr)*
    and_expr   := unary ('and' unary)*
    unary      := 'not' unary | 'some' NAME '.' unary | 'all' NAME '.' unary | atom
    atom       := 'top' | 'bot' | NAME | 'T' '(' concept ')' | '(' concept ')'
    CMP        := '>=' | '<=' | '>' | '<'
    threshold  := NUMBER | NUMBER '/' NUMBER

Precedence is not > and > or; a quantifier body extends over one unary
expression, so ``some r . A and B`` reads ``(some r . A) and B``.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field

from .concepts import (And, Axiom, Bot, ConceptAssertion, ConceptExpr, Exists, Forall,
                       Inclusion, Name, Not, Or, RoleAssertion, Top, Typ)
from .degrees import GradedScale, check_degree

KEYWORDS = {"top", "bot", "not", "and", "or", "some", "all", "T"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>-?\d+(\.\d+)?([eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><:|>=|<=|>|<|\(|\)|\{|\}|,|@|/|\.)
""", re.VERBOSE)


class KbSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line, self.column, self.expected = line, column, expected
        hint = f" (expected {' | '.join(expected)})" if expected else ""
        super().__init__(f"{line}:{column}: {message}{hint}")


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'name' | 'number' | 'kw' | operator literal | 'eof'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise KbSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        lexeme = m.group()
        col = pos - line_start + 1
        if kind == "ws":
            nl = lexeme.count("\n")
            if nl:
                line += nl
                line_start = pos + lexeme.rindex("\n") + 1
        elif kind == "comment":
            pass
        elif kind == "number":
            toks.append(_Tok("number", lexeme, line, col))
        elif kind == "name":
            toks.append(_Tok("kw" if lexeme in KEYWORDS else "name", lexeme, line, col))
        else:
            toks.append(_Tok(lexeme, lexeme, line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, len(text) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, scale: GradedScale | None = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.scale = scale

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> _Tok:
        tok = self.peek()
        if tok.kind != kind and not (kind == "kw" and tok.kind == "kw"):
            raise KbSyntaxError(f"found {tok.text!r}", tok.line, tok.col,
                                expected=(what or kind,))
        return self.next()

    def expect_kw(self, word: str) -> _Tok:
        tok = self.peek()
        if tok.kind != "kw" or tok.text != word:
            raise KbSyntaxError(f"found {tok.text!r}", tok.line, tok.col, expected=(word,))
        return self.next()

    def fail(self, expected: tuple[str, ...]):
        tok = self.peek()
        raise KbSyntaxError(f"found {tok.text!r}", tok.line, tok.col, expected=expected)

    # concept grammar -------------------------------------------------------
    def concept(self) -> ConceptExpr:
        node = self.and_expr()
        while self.peek().kind == "kw" and self.peek().text == "or":
            self.next()
            node = Or(node, self.and_expr())
        return node

    def and_expr(self) -> ConceptExpr:
        node = self.unary()
        while self.peek().kind == "kw" and self.peek().text == "and":
            self.next()
            node = And(node, self.unary())
        return node

    def unary(self) -> ConceptExpr:
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "not":
            self.next()
            return Not(self.unary())
        if tok.kind == "kw" and tok.text in ("some", "all"):
            self.next()
            role = self.expect("name", "role name").text
            self.expect(".")
            body = self.unary()
            return Exists(role, body) if tok.text == "some" else Forall(role, body)
        return self.atom()

    def atom(self) -> ConceptExpr:
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "top":
            self.next()
            return Top()
        if tok.kind == "kw" and tok.text == "bot":
            self.next()
            return Bot()
        if tok.kind == "kw" and tok.text == "T":
            self.next()
            self.expect("(")
            sub = self.concept()
            self.expect(")")
            return Typ(sub)  # raises NestedTypicalityError on T inside T
        if tok.kind == "name":
            return Name(self.next().text)
        if tok.kind == "(":
            self.next()
            node = self.concept()
            self.expect(")")
            return node
        self.fail(("top", "bot", "T(", "concept name", "("))

    # numbers ---------------------------------------------------------------
    def number(self) -> float:
        tok = self.expect("number", "number")
        value = float(tok.text)
        if not math.isfinite(value):
            raise KbSyntaxError(f"non-finite number {tok.text!r}", tok.line, tok.col)
        return value

    def threshold(self) -> float:
        tok = self.peek()
        value = self.number()
        if self.peek().kind == "/":
            self.next()
            den = self.number()
            if den <= 0 or den != int(den) or value != int(value) or value < 0:
                raise KbSyntaxError("fractional threshold must be k/n with integers",
                                    tok.line, tok.col)
            if self.scale is not None and int(den) != self.scale.n:
                raise KbSyntaxError(
                    f"threshold denominator {int(den)} does not match the active scale "
                    f"1/{self.scale.n}", tok.line, tok.col)
            value = value / den
        try:
            check_degree(value)
        except ValueError:
            raise KbSyntaxError(f"threshold {value} outside [0, 1]", tok.line, tok.col) from None
        if self.scale is not None and not self.scale.contains(value):
            raise KbSyntaxError(f"threshold {value} not on the 1/{self.scale.n} scale",
                                tok.line, tok.col)
        return value

    def comparator(self) -> str:
        tok = self.peek()
        if tok.kind in (">=", "<=", ">", "<"):
            return self.next().kind
        self.fail((">=", "<=", ">", "<"))

    # statements -------------------------------------------------------------
    def axiom(self, lhs: ConceptExpr | None = None) -> Axiom:
        lhs = lhs if lhs is not None else self.concept()
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            first = self.expect("name", "individual name").text
            if self.peek().kind == ",":
                self.next()
                second = self.expect("name", "individual name").text
                self.expect(")")
                if not isinstance(lhs, Name):
                    raise KbSyntaxError("role assertions need a plain role name",
                                        tok.line, tok.col)
                cmp = self.comparator()
                return RoleAssertion(lhs.name, first, second, cmp, self.threshold())
            self.expect(")")
            cmp = self.comparator()
            return ConceptAssertion(lhs, first, cmp, self.threshold())
        if tok.kind == "<:":
            self.next()
            rhs = self.concept()
            cmp = self.comparator()
            return Inclusion(lhs, rhs, cmp, self.threshold())
        self.fail(("<:", "( for an assertion"))

    def weighted_inclusion(self, block_name: str) -> tuple[ConceptExpr, float]:
        tok = self.expect_kw("T")
        self.expect("(")
        lhs = self.expect("name", "concept name").text
        self.expect(")")
        if lhs != block_name:
            raise KbSyntaxError(
                f"weighted inclusion head T({lhs}) must match block {block_name!r}",
                tok.line, tok.col)
        self.expect("<:")
        body = self.concept()
        self.expect("@")
        weight = self.number()
        return body, weight

    def block(self) -> tuple[str, list[tuple[ConceptExpr, float]]]:
        name_tok = self.expect("name", "concept name")
        self.expect("{")
        entries: list[tuple[ConceptExpr, float]] = []
        while not (self.peek().kind == "}"):
            if self.peek().kind == "eof":
                self.fail(("}",))
            entries.append(self.weighted_inclusion(name_tok.text))
        self.expect("}")
        if not entries:
            raise KbSyntaxError(f"weighted block {name_tok.text!r} is empty",
                                name_tok.line, name_tok.col)
        return name_tok.text, entries

    def document(self) -> "KbDocument":
        doc = KbDocument()
        while self.peek().kind != "eof":
            if self.peek().kind == "name" and self.peek(1).kind == "{":
                name, entries = self.block()
                if name in doc.weighted_blocks:
                    warnings.warn(f"duplicate weighted block for {name!r}; merging",
                                  stacklevel=4)
                    doc.weighted_blocks[name].extend(entries)
                else:
                    doc.weighted_blocks[name] = entries
                continue
            ax = self.axiom()
            if isinstance(ax, Inclusion):
                doc.strict_axioms.append(ax)
            else:
                doc.assertions.append(ax)
        return doc


@dataclass
class KbDocument:
    """A weighted knowledge base: strict axioms, assertions, weighted blocks.

    ``weighted_blocks`` maps each distinguished concept name C to the entries
    of its block, i.e. the bodies D and weights w of inclusions T(C) <: D @ w.
    """

    strict_axioms: list[Inclusion] = field(default_factory=list)
    assertions: list[Axiom] = field(default_factory=list)
    weighted_blocks: dict[str, list[tuple[ConceptExpr, float]]] = field(default_factory=dict)

    def all_axioms(self) -> list[Axiom]:
        return [*self.strict_axioms, *self.assertions]


def parse_concept(text: str) -> ConceptExpr:
    p = _Parser(text)
    node = p.concept()
    p.expect("eof", "end of input")
    return node


def parse_axiom(text: str, scale: GradedScale | None = None) -> Axiom:
    p = _Parser(text, scale)
    ax = p.axiom()
    p.expect("eof", "end of input")
    return ax


def parse_inclusion(text: str, scale: GradedScale | None = None,
                    require_threshold: bool = True) -> tuple[ConceptExpr, ConceptExpr, str | None, float | None]:
    """Parse ``C <: D [cmp threshold]``; the comparator part may be omitted."""
    p = _Parser(text, scale)
    lhs = p.concept()
    p.expect("<:")
    rhs = p.concept()
    if p.peek().kind == "eof":
        if require_threshold:
            p.fail((">=", "<=", ">", "<"))
        return lhs, rhs, None, None
    cmp = p.comparator()
    t = p.threshold()
    p.expect("eof", "end of input")
    return lhs, rhs, cmp, t


def parse_kb(text: str, scale: GradedScale | None = None) -> KbDocument:
    p = _Parser(text, scale)
    return p.document()


# serialization ---------------------------------------------------------------

_PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = 1, 2, 3, 4


def _prec(c: ConceptExpr) -> int:
    if isinstance(c, Or):
        return _PREC_OR
    if isinstance(c, And):
        return _PREC_AND
    if isinstance(c, (Not, Exists, Forall)):
        return _PREC_UNARY
    return _PREC_ATOM


def _fmt(c: ConceptExpr, min_prec: int) -> str:
    text: str
    if isinstance(c, Top):
        text = "top"
    elif isinstance(c, Bot):
        text = "bot"
    elif isinstance(c, Name):
        text = c.name
    elif isinstance(c, Typ):
        text = f"T({_fmt(c.sub, _PREC_OR)})"
    elif isinstance(c, Not):
        text = f"not {_fmt(c.sub, _PREC_UNARY)}"
    elif isinstance(c, Exists):
        text = f"some {c.role} . {_fmt(c.sub, _PREC_UNARY)}"
    elif isinstance(c, Forall):
        text = f"all {c.role} . {_fmt(c.sub, _PREC_UNARY)}"
    elif isinstance(c, And):
        # parenthesize an equal-precedence right child to keep left association
        text = f"{_fmt(c.left, _PREC_AND)} and {_fmt(c.right, _PREC_AND + 1)}"
    elif isinstance(c, Or):
        text = f"{_fmt(c.left, _PREC_OR)} or {_fmt(c.right, _PREC_OR + 1)}"
    else:  # pragma: no cover
        raise TypeError(f"unknown concept node {c!r}")
    if _prec(c) < min_prec:
        return f"({text})"
    return text


def concept_to_text(c: ConceptExpr) -> str:
    return _fmt(c, _PREC_OR)


def _num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def axiom_to_text(ax: Axiom) -> str:
    if isinstance(ax, Inclusion):
        return f"{concept_to_text(ax.lhs)} <: {concept_to_text(ax.rhs)} {ax.cmp} {_num(ax.threshold)}"
    if isinstance(ax, ConceptAssertion):
        lhs = concept_to_text(ax.concept)
        if not isinstance(ax.concept, (Name, Top, Bot, Typ)):
            lhs = f"({lhs})"
        return f"{lhs}({ax.individual}) {ax.cmp} {_num(ax.threshold)}"
    return f"{ax.role}({ax.subject},{ax.target}) {ax.cmp} {_num(ax.threshold)}"


def kb_to_text(doc: KbDocument) -> str:
    lines: list[str] = []
    for ax in doc.strict_axioms:
        lines.append(axiom_to_text(ax))
    for ax in doc.assertions:
        lines.append(axiom_to_text(ax))
    for name, entries in doc.weighted_blocks.items():
        lines.append(f"{name} {{")
        for body, weight in entries:
            lines.append(f"  T({name}) <: {concept_to_text(body)} @ {_num(weight)}")
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")
