"""Predicate language: AST, parser, canonical printer, free identifiers.

The language is a pragmatic subset of B-style predicate notation:
conjunction ``&``, disjunction ``or``, implication ``=>``, equivalence
``<=>``, negation ``not``, comparisons and set membership
(``= /= < <= > >= : /: <: <<:``), maplets ``|->``, integer arithmetic
(``+ - * / mod``, unary ``-``), function application ``f(x, y)`` and
quantifiers ``!x,y.(...)`` (forall) / ``#x.(...)`` (exists).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

RESERVED = frozenset({"not", "or", "true", "false", "mod"})

# Dots only as interior separators (so `!x.(...)` lexes as x, DOT, LPAREN);
# every accepted name still matches the documented [A-Za-z_][A-Za-z0-9_.$]*
# shape, and every accepted name survives a print/parse round trip.
_IDENT_FULL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_$]*(?:\.[A-Za-z0-9_$]+)*\Z")


def is_valid_identifier(name: str) -> bool:
    """True if ``name`` is usable as an identifier (shape ok, not reserved)."""
    return bool(_IDENT_FULL_RE.match(name)) and name not in RESERVED


class FormulaSyntaxError(ValueError):
    """Parse failure, carrying 1-based position and the expected token set."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)


@dataclass(frozen=True)
class Ident:
    name: str

    def __post_init__(self) -> None:
        if not is_valid_identifier(self.name):
            raise ValueError(f"invalid identifier: {self.name!r}")


@dataclass(frozen=True)
class IntLit:
    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("integer literals are non-negative; wrap in unary minus")


@dataclass(frozen=True)
class BoolLit:
    value: bool


UNARY_OPS = frozenset({"not", "neg"})
BINARY_OPS = frozenset({
    "&", "or", "=>", "<=>",
    "=", "/=", "<", "<=", ">", ">=", ":", "/:", "<:", "<<:",
    "+", "-", "*", "/", "mod", "|->",
})
COMPARISON_OPS = frozenset({"=", "/=", "<", "<=", ">", ">=", ":", "/:", "<:", "<<:"})
QUANTIFIER_KINDS = frozenset({"forall", "exists"})


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Formula"

    def __post_init__(self) -> None:
        if self.op not in UNARY_OPS:
            raise ValueError(f"unknown unary operator: {self.op!r}")


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Formula"
    right: "Formula"

    def __post_init__(self) -> None:
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary operator: {self.op!r}")


@dataclass(frozen=True)
class Quantified:
    kind: str
    bound: tuple[str, ...]
    body: "Formula"

    def __post_init__(self) -> None:
        if self.kind not in QUANTIFIER_KINDS:
            raise ValueError(f"unknown quantifier kind: {self.kind!r}")
        if not self.bound:
            raise ValueError("quantifier needs at least one bound variable")
        if len(set(self.bound)) != len(self.bound):
            raise ValueError(f"duplicate bound variable in {self.bound}")
        for name in self.bound:
            if not is_valid_identifier(name):
                raise ValueError(f"invalid bound variable: {name!r}")


@dataclass(frozen=True)
class Apply:
    fn: "Formula"
    args: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError("application needs at least one argument")


Formula = Union[Ident, IntLit, BoolLit, Unary, Binary, Quantified, Apply]


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>/\*.*?\*/)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_$]*(?:\.[A-Za-z0-9_$]+)*)
    | (?P<int>[0-9]+)
    | (?P<op><=>|<<:|<=|<:|>=|/=|/:|\|->|=>|[&=<>:+\-*/(),.!#])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "int" | "op" | "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> Iterator[_Token]:
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        tok_text = m.group()
        if kind not in ("ws", "comment"):
            yield _Token(kind, tok_text, line, m.start() - line_start + 1)
        newlines = tok_text.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + tok_text.rfind("\n") + 1
        pos = m.end()
    yield _Token("eof", "", line, n - line_start + 1)


# ---------------------------------------------------------------------------
# Parser
#
# Binding strength, loosest to tightest:
#   <=> (left)  =>(right)  or(left)  &(left)  not  comparisons(non-assoc)
#   |->(left)  + -(left)  * / mod(left)  unary -  application  atoms
#
# The maplet sits between the comparisons and additive arithmetic so that
# `x |-> y : S` reads as `(x |-> y) : S`.

_ADDITIVE = ("+", "-")
_MULTIPLICATIVE = ("*", "/", "mod")


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, message: str, *expected: str) -> FormulaSyntaxError:
        tok = self.peek()
        shown = tok.text if tok.kind != "eof" else "end of input"
        return FormulaSyntaxError(f"{message}, found {shown!r}", tok.line, tok.column, expected)

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            raise self.error(f"expected {text!r}", text)
        return self.advance()

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind != "eof" and tok.text == text

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok.kind != "eof":
            raise self.error("trailing input after formula", "end of input")
        return f

    def iff(self) -> Formula:
        f = self.impl()
        while self.at("<=>"):
            self.advance()
            f = Binary("<=>", f, self.impl())
        return f

    def impl(self) -> Formula:
        f = self.disj()
        if self.at("=>"):
            self.advance()
            return Binary("=>", f, self.impl())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("or"):
            self.advance()
            f = Binary("or", f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.negation()
        while self.at("&"):
            self.advance()
            f = Binary("&", f, self.negation())
        return f

    def negation(self) -> Formula:
        if self.at("not"):
            self.advance()
            return Unary("not", self.negation())
        return self.comparison()

    def comparison(self) -> Formula:
        f = self.maplet()
        tok = self.peek()
        if tok.kind == "op" and tok.text in COMPARISON_OPS:
            self.advance()
            right = self.maplet()
            f = Binary(tok.text, f, right)
            again = self.peek()
            if again.kind == "op" and again.text in COMPARISON_OPS:
                # comparisons do not chain
                raise self.error("comparison operators are non-associative")
        return f

    def maplet(self) -> Formula:
        f = self.additive()
        while self.at("|->"):
            self.advance()
            f = Binary("|->", f, self.additive())
        return f

    def additive(self) -> Formula:
        f = self.multiplicative()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in _ADDITIVE:
                self.advance()
                f = Binary(tok.text, f, self.multiplicative())
            else:
                return f

    def multiplicative(self) -> Formula:
        f = self.factor()
        while True:
            tok = self.peek()
            if tok.text in _MULTIPLICATIVE and tok.kind in ("op", "ident"):
                self.advance()
                f = Binary(tok.text, f, self.factor())
            else:
                return f

    def factor(self) -> Formula:
        if self.at("-"):
            self.advance()
            return Unary("neg", self.factor())
        return self.application()

    def application(self) -> Formula:
        f = self.atom()
        while self.at("("):
            self.advance()
            args = [self.iff()]
            while self.at(","):
                self.advance()
                args.append(self.iff())
            self.expect(")")
            f = Apply(f, tuple(args))
        return f

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ident":
            if tok.text == "true":
                self.advance()
                return BoolLit(True)
            if tok.text == "false":
                self.advance()
                return BoolLit(False)
            if tok.text in RESERVED:
                raise self.error(f"reserved keyword {tok.text!r} is not a formula")
            self.advance()
            return Ident(tok.text)
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text))
        if tok.text == "(":
            self.advance()
            f = self.iff()
            self.expect(")")
            return f
        if tok.text in ("!", "#"):
            kind = "forall" if tok.text == "!" else "exists"
            self.advance()
            bound = [self.bound_name()]
            while self.at(","):
                self.advance()
                bound.append(self.bound_name())
            self.expect(".")
            self.expect("(")
            body = self.iff()
            self.expect(")")
            if len(set(bound)) != len(bound):
                raise FormulaSyntaxError(
                    f"duplicate bound variable in {tuple(bound)}", tok.line, tok.column
                )
            return Quantified(kind, tuple(bound), body)
        raise self.error("expected a formula", "identifier", "integer", "(", "!", "#")

    def bound_name(self) -> str:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in RESERVED:
            raise self.error("expected a bound variable name", "identifier")
        self.advance()
        return tok.text


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a Formula; raises FormulaSyntaxError with position."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printer

_LEVEL_IFF = 1
_LEVEL_IMPL = 2
_LEVEL_OR = 3
_LEVEL_AND = 4
_LEVEL_NOT = 5
_LEVEL_CMP = 6
_LEVEL_MAPLET = 7
_LEVEL_ADD = 8
_LEVEL_MUL = 9
_LEVEL_NEG = 10
_LEVEL_APPLY = 11
_LEVEL_ATOM = 12

_BINARY_LEVEL = {
    "<=>": _LEVEL_IFF, "=>": _LEVEL_IMPL, "or": _LEVEL_OR, "&": _LEVEL_AND,
    "|->": _LEVEL_MAPLET, "+": _LEVEL_ADD, "-": _LEVEL_ADD,
    "*": _LEVEL_MUL, "/": _LEVEL_MUL, "mod": _LEVEL_MUL,
}
_RIGHT_ASSOC = frozenset({"=>"})


def print_formula(f: Formula) -> str:
    """Canonical text: single spaces around binary operators, minimal parens."""
    return _render(f, 0)


def _render(f: Formula, required: int) -> str:
    if isinstance(f, Ident):
        return f.name
    if isinstance(f, IntLit):
        return str(f.value)
    if isinstance(f, BoolLit):
        return "true" if f.value else "false"
    if isinstance(f, Quantified):
        sigil = "!" if f.kind == "forall" else "#"
        return f"{sigil}{','.join(f.bound)}.({_render(f.body, 0)})"
    if isinstance(f, Apply):
        fn = _render(f.fn, _LEVEL_APPLY)
        args = ", ".join(_render(a, 0) for a in f.args)
        return f"{fn}({args})"
    if isinstance(f, Unary):
        if f.op == "not":
            body = f"not {_render(f.operand, _LEVEL_NOT)}"
            return f"({body})" if required > _LEVEL_NOT else body
        body = f"-{_render(f.operand, _LEVEL_NEG)}"
        return f"({body})" if required > _LEVEL_NEG else body
    if isinstance(f, Binary):
        if f.op in COMPARISON_OPS:
            level = _LEVEL_CMP
            left = _render(f.left, level + 1)
            right = _render(f.right, level + 1)
        else:
            level = _BINARY_LEVEL[f.op]
            if f.op in _RIGHT_ASSOC:
                left = _render(f.left, level + 1)
                right = _render(f.right, level)
            else:
                left = _render(f.left, level)
                right = _render(f.right, level + 1)
        body = f"{left} {f.op} {right}"
        return f"({body})" if required > level else body
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Free identifiers

def free_identifiers(f: Formula) -> frozenset[str]:
    """Identifiers occurring free in ``f`` (quantifier-bound names excluded).

    Applied function symbols count as free identifiers.
    """
    out: set[str] = set()
    _collect_free(f, frozenset(), out)
    return frozenset(out)


def _collect_free(f: Formula, bound: frozenset[str], out: set[str]) -> None:
    if isinstance(f, Ident):
        if f.name not in bound:
            out.add(f.name)
    elif isinstance(f, (IntLit, BoolLit)):
        pass
    elif isinstance(f, Unary):
        _collect_free(f.operand, bound, out)
    elif isinstance(f, Binary):
        _collect_free(f.left, bound, out)
        _collect_free(f.right, bound, out)
    elif isinstance(f, Quantified):
        _collect_free(f.body, bound | set(f.bound), out)
    elif isinstance(f, Apply):
        _collect_free(f.fn, bound, out)
        for a in f.args:
            _collect_free(a, bound, out)
    else:
        raise TypeError(f"not a formula: {f!r}")
