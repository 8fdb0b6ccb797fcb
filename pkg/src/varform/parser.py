"""Recursive-descent parser for equations, Laurent series and operators.

Grammar::

    equation := expr ['=' expr]
    expr     := ['-'] term { ('+' | '-') term }
    term     := factor { '*' factor }
    factor   := atom ['^' integer]
    atom     := 'y' {"'"} | 'y^(' uint ')' | 'z' | rational | '(' expr ')'
    rational := int ['/' uint]

``LHS = RHS`` is normalized to ``LHS - RHS``.  Division is only accepted by
a nonzero rational or a power of z; dividing by anything that contains a jet
is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .diffpoly import DiffPoly
from .errors import (
    DivisionByJetError,
    NonIntegerExponentError,
    ParseError,
    ZeroDenominatorError,
)
from .laurent import LaurentSeries

__all__ = [
    "ParsedEquation",
    "parse_equation",
    "parse_poly",
    "parse_series",
    "parse_operator_coeffs",
]


@dataclass(frozen=True)
class ParsedEquation:
    poly: DiffPoly
    source_text: str
    normalized_from_equation: bool


@dataclass(frozen=True)
class _Tok:
    kind: str  # NUM JET Z OP EOF
    value: object
    pos: int


_OPS = set("+-*/^()=")


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                # only legal position for a decimal is an exponent; let the
                # parser decide which error applies
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                toks.append(_Tok("DEC", text[i:k], i))
                i = k
                continue
            toks.append(_Tok("NUM", int(text[i:j]), i))
            i = j
        elif ch == "y":
            start = i
            i += 1
            if text.startswith("^(", i):
                j = i + 2
                m = re.match(r"\s*(-?\d+(?:[./]\d+)?)\s*\)", text[j:])
                if not m:
                    raise ParseError("expected y^(k) with a non-negative integer k", j)
                raw = m.group(1)
                if "." in raw or "/" in raw:
                    raise NonIntegerExponentError(f"jet index {raw!r} is not an integer", j)
                k = int(raw)
                if k < 0:
                    raise ParseError(f"jet index {k} is negative", j)
                toks.append(_Tok("JET", k, start))
                i = j + m.end()
            else:
                k = 0
                while i < n and text[i] == "'":
                    k += 1
                    i += 1
                toks.append(_Tok("JET", k, start))
        elif ch == "z":
            toks.append(_Tok("Z", None, i))
            i += 1
        elif ch in _OPS:
            toks.append(_Tok("OP", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("EOF", None, n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def _is_op(self, ch) -> bool:
        return self.cur.kind == "OP" and self.cur.value == ch

    def _expect_op(self, ch):
        if not self._is_op(ch):
            raise ParseError(f"expected {ch!r}", self.cur.pos)
        self.i += 1

    def equation(self):
        lhs = self.expr()
        if self._is_op("="):
            self.i += 1
            rhs = self.expr()
            self._end()
            return lhs - rhs, True
        self._end()
        return lhs, False

    def _end(self):
        if self.cur.kind != "EOF":
            raise ParseError(f"unexpected token {self._describe(self.cur)}", self.cur.pos)

    @staticmethod
    def _describe(tok: _Tok) -> str:
        if tok.kind == "OP":
            return repr(tok.value)
        if tok.kind == "EOF":
            return "end of input"
        return tok.kind.lower()

    def expr(self) -> DiffPoly:
        neg = False
        if self._is_op("-") or self._is_op("+"):
            neg = self.cur.value == "-"
            self.i += 1
        out = self.term()
        if neg:
            out = -out
        while self._is_op("+") or self._is_op("-"):
            op = self.cur.value
            self.i += 1
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> DiffPoly:
        out = self.factor()
        while self._is_op("*") or self._is_op("/"):
            op = self.cur.value
            pos = self.cur.pos
            self.i += 1
            f = self.factor()
            if op == "*":
                out = out * f
            else:
                out = out * self._inverse(f, pos)
        return out

    def _inverse(self, f: DiffPoly, pos: int) -> DiffPoly:
        if not f.is_x_free():
            raise DivisionByJetError("division by an expression containing y", pos)
        flat = f.flat
        if not flat:
            raise ZeroDenominatorError("division by zero", pos)
        if len(flat) != 1:
            raise ParseError("division is only allowed by a rational or a power of z", pos)
        ((m, e), v), = flat.items()
        return DiffPoly.zpow(-e, 1 / v)

    def factor(self) -> DiffPoly:
        base = self.atom()
        if self._is_op("^"):
            self.i += 1
            k = self._integer()
            if k < 0:
                return self._inverse(base, self.cur.pos) ** (-k)
            return base ** k
        return base

    def _integer(self) -> int:
        paren = False
        if self._is_op("("):
            paren = True
            self.i += 1
        sign = 1
        if self._is_op("-"):
            sign = -1
            self.i += 1
        tok = self.cur
        if tok.kind == "DEC":
            raise NonIntegerExponentError(f"exponent {tok.value} is not an integer", tok.pos)
        if tok.kind != "NUM":
            raise ParseError("expected an integer exponent", tok.pos)
        self.i += 1
        if paren and self._is_op("/"):
            raise NonIntegerExponentError("fractional exponents are not allowed", self.cur.pos)
        if paren:
            self._expect_op(")")
        return sign * tok.value

    def atom(self) -> DiffPoly:
        tok = self.cur
        if tok.kind == "JET":
            self.i += 1
            return DiffPoly.jet(tok.value)
        if tok.kind == "Z":
            self.i += 1
            return DiffPoly.zpow(1)
        if tok.kind == "NUM":
            self.i += 1
            value = Fraction(tok.value)
            if self._is_op("/") and self.toks[self.i + 1].kind == "NUM":
                den = self.toks[self.i + 1]
                if den.value == 0:
                    raise ZeroDenominatorError("zero denominator in rational literal", den.pos)
                self.i += 2
                value = value / den.value
            return DiffPoly.coefficient_poly(value)
        if tok.kind == "DEC":
            raise ParseError("decimal numbers are not supported; write p/q", tok.pos)
        if self._is_op("("):
            self.i += 1
            inner = self.expr()
            self._expect_op(")")
            return inner
        raise ParseError(f"unexpected {self._describe(tok)}", tok.pos)


def parse_poly(text: str) -> DiffPoly:
    return parse_equation(text).poly


def parse_equation(text: str) -> ParsedEquation:
    if not text.strip():
        raise ParseError("empty input", 0)
    poly, was_eq = _Parser(text).equation()
    return ParsedEquation(poly=poly, source_text=text, normalized_from_equation=was_eq)


_O_TERM = re.compile(r"\+\s*O\(\s*z\s*(?:\^\s*\(?\s*(-?\d+)\s*\)?)?\s*\)\s*$")


def parse_series(text: str) -> LaurentSeries:
    """Parse ``3/2*z^-1 + 5 - z^2``, optionally ending in ``+ O(z^P)``."""
    prec: Optional[int] = None
    body = text.strip()
    m = _O_TERM.search(body)
    if m:
        prec = int(m.group(1)) if m.group(1) is not None else 1
        body = body[: m.start()].strip()
        if not body:
            return LaurentSeries((), prec)
    elif body.startswith("O("):
        m = re.fullmatch(r"O\(\s*z\s*(?:\^\s*\(?\s*(-?\d+)\s*\)?)?\s*\)", body)
        if not m:
            raise ParseError("malformed O(z^P) term", 0)
        return LaurentSeries((), int(m.group(1)) if m.group(1) else 1)
    p = _Parser(body)
    poly = p.expr()
    p._end()
    if not poly.is_x_free():
        raise ParseError("a Laurent series may not contain y", 0)
    c = poly.x_free_part()
    return LaurentSeries(c.coeffs, prec)


def parse_operator_coeffs(text: str) -> List[LaurentSeries]:
    """``-1; z+2`` -> [-1, z+2] (coefficient of d^0 first)."""
    parts = [s.strip() for s in text.split(";")]
    if any(not s for s in parts):
        raise ParseError("empty operator coefficient", 0)
    return [parse_series(s) for s in parts]
