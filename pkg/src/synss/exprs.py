"""Shared parser for product expressions in seed/claim/naming fixtures.

Grammar (ASCII):

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := NAME | INT | '(' expr ')'

Expressions normalize to a sum of monomial terms; ``tau`` factors are
split out so a term is (tau power, {name: exponent}).  Parenthesized
sums distribute, so ``w2^2*(delta+alpha*g)`` expands to two monomials.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|[0-9]+|\^|\*|\+|\(|\)|\{|\})")


class ExprError(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    """One monomial: a tau power and a multiset of named factors."""

    tau: int
    factors: tuple[tuple[str, int], ...]  # sorted (name, exponent), exponents > 0

    @classmethod
    def make(cls, tau: int, counts: dict[str, int]) -> "Term":
        return cls(tau, tuple(sorted((n, e) for n, e in counts.items() if e)))

    def times(self, other: "Term") -> "Term":
        counts = dict(self.factors)
        for n, e in other.factors:
            counts[n] = counts.get(n, 0) + e
        return Term.make(self.tau + other.tau, counts)

    def without_tau(self) -> "Term":
        return Term(0, self.factors)

    def __str__(self) -> str:
        parts = []
        if self.tau:
            parts.append("tau" if self.tau == 1 else f"tau^{self.tau}")
        for n, e in self.factors:
            parts.append(n if e == 1 else f"{n}^{e}")
        return "*".join(parts) if parts else "1"


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ExprError(f"bad character at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ExprError("unexpected end of expression")
        self.pos += 1
        return tok

    def parse_expr(self) -> list[Term]:
        terms = self.parse_term()
        while self.peek() == "+":
            self.take()
            terms = _add(terms, self.parse_term())
        return terms

    def parse_term(self) -> list[Term]:
        terms = self.parse_factor()
        while self.peek() == "*":
            self.take()
            terms = _mul(terms, self.parse_factor())
        return terms

    def parse_factor(self) -> list[Term]:
        base = self.parse_atom()
        power = 1
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise ExprError(f"exponent must be an integer, got {tok!r}")
            power = int(tok)
        out = [Term(0, ())]
        for _ in range(power):
            out = _mul(out, base)
        return out

    def parse_atom(self) -> list[Term]:
        tok = self.take()
        if tok == "(" or tok == "{":
            closer = ")" if tok == "(" else "}"
            inner = self.parse_expr()
            if self.take() != closer:
                raise ExprError(f"missing {closer!r}")
            return inner
        if tok in {")", "}", "^", "*", "+"}:
            raise ExprError(f"unexpected {tok!r}")
        if tok == "0":
            return []
        if tok == "1":
            return [Term(0, ())]
        if tok == "tau":
            return [Term(1, ())]
        return [Term.make(0, {tok: 1})]


def _add(a: list[Term], b: list[Term]) -> list[Term]:
    out = list(a)
    for t in b:
        if t in out:
            out.remove(t)  # F2 cancellation
        else:
            out.append(t)
    return out


def _mul(a: list[Term], b: list[Term]) -> list[Term]:
    out: list[Term] = []
    for x in a:
        for y in b:
            t = x.times(y)
            if t in out:
                out.remove(t)
            else:
                out.append(t)
    return out


def parse_expression(text: str) -> list[Term]:
    """Parse to a list of monomial terms (the zero expression is [])."""
    text = text.strip()
    if text == "0":
        return []
    parser = _Parser(_tokenize(text))
    terms = parser.parse_expr()
    if parser.peek() is not None:
        raise ExprError(f"trailing input at {parser.tokens[parser.pos:]}")
    return terms


def monomial_key(term: Term) -> tuple[tuple[str, int], ...]:
    if term.tau:
        raise ExprError("tau factor not allowed here")
    return term.factors
