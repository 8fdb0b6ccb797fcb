"""Formal Laurent series over the rationals.

A :class:`LaurentSeries` stores finitely many nonzero coefficients together
with a precision marker.  ``prec is None`` means the series is exact (a
Laurent polynomial); an integer ``prec = P`` means every coefficient at an
exponent below ``P`` is known and nothing is known from ``P`` upward.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import InsufficientPrecisionError, NonIntegrableError

__all__ = [
    "Fraction",
    "LaurentSeries",
    "ZERO",
    "ONE",
    "Z",
    "add",
    "mul",
    "ddz",
    "residue",
    "antiderivative",
    "compare",
    "format_rational",
]


def _min_prec(p: Optional[int], q: Optional[int]) -> Optional[int]:
    if p is None:
        return q
    if q is None:
        return p
    return min(p, q)


class LaurentSeries:
    """Immutable Laurent series with exact rational coefficients."""

    __slots__ = ("_c", "_prec", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | Iterable = (), prec: Optional[int] = None):
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = coeffs
        c = {}
        for e, v in items:
            e = int(e)
            v = Fraction(v)
            if v == 0 or (prec is not None and e >= prec):
                continue
            c[e] = c.get(e, 0) + v
            if c[e] == 0:
                del c[e]
        self._c = dict(sorted(c.items()))
        self._prec = None if prec is None else int(prec)
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, c: dict, prec: Optional[int]) -> "LaurentSeries":
        # c must already be canonical: no zeros, nothing at or above prec
        obj = cls.__new__(cls)
        obj._c = dict(sorted(c.items()))
        obj._prec = prec
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, value) -> "LaurentSeries":
        return cls({0: value})

    @classmethod
    def monomial(cls, exponent: int, value=1) -> "LaurentSeries":
        return cls({exponent: value})

    # accessors
    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    @property
    def prec(self) -> Optional[int]:
        return self._prec

    @property
    def is_exact(self) -> bool:
        return self._prec is None

    def items(self):
        return self._c.items()

    def is_zero(self) -> bool:
        """True only for the exact zero series."""
        return not self._c and self._prec is None

    def __bool__(self):
        return not self.is_zero()

    def __getitem__(self, n: int) -> Fraction:
        if self._prec is not None and n >= self._prec:
            raise InsufficientPrecisionError(
                f"coefficient of z^{n} requested but series is only known below z^{self._prec}"
            )
        return self._c.get(n, Fraction(0))

    coeff = __getitem__

    def valuation(self) -> Optional[int]:
        """Lowest exponent carrying a known nonzero coefficient.

        For an inexact series with no stored terms this is the precision
        bound; for the exact zero series it is ``None``.
        """
        if self._c:
            return next(iter(self._c))
        return self._prec

    def degree(self) -> Optional[int]:
        if self._c:
            return next(reversed(self._c))
        return None

    def truncate(self, prec: int) -> "LaurentSeries":
        """Forget every coefficient at exponent >= ``prec``."""
        return LaurentSeries(self._c, _min_prec(self._prec, prec))

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by z^k."""
        prec = None if self._prec is None else self._prec + k
        return LaurentSeries._raw({e + k: v for e, v in self._c.items()}, prec)

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._raw({e: -v for e, v in self._c.items()}, self._prec)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def scale(self, s) -> "LaurentSeries":
        s = Fraction(s)
        if s == 0:
            return LaurentSeries((), self._prec)
        return LaurentSeries._raw({e: s * v for e, v in self._c.items()}, self._prec)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials")
        out = ONE
        base = self
        while n:
            if n & 1:
                out = mul(out, base)
            base = mul(base, base)
            n >>= 1
        return out

    # comparison: structural, including the precision marker
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.constant(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self._prec == other._prec and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self._c.items()), self._prec))
        return self._hash

    def __repr__(self):
        return f"LaurentSeries({str(self)!r})"

    def __str__(self):
        return format_series(self)


def _coerce(x):
    if isinstance(x, LaurentSeries):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentSeries.constant(x)
    return NotImplemented


def add(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    prec = _min_prec(f.prec, g.prec)
    c = dict(f._c)
    for e, v in g._c.items():
        s = c.get(e, 0) + v
        if s:
            c[e] = s
        else:
            c.pop(e, None)
    if prec is not None:
        c = {e: v for e, v in c.items() if e < prec}
    return LaurentSeries._raw(c, prec)


def mul(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    if f.is_zero() or g.is_zero():
        return ZERO
    vf, vg = f.valuation(), g.valuation()
    cands = []
    if f.prec is not None:
        cands.append(f.prec + vg)
    if g.prec is not None:
        cands.append(g.prec + vf)
    prec = min(cands) if cands else None
    c: dict = {}
    for e1, v1 in f._c.items():
        for e2, v2 in g._c.items():
            e = e1 + e2
            if prec is not None and e >= prec:
                continue
            c[e] = c.get(e, 0) + v1 * v2
    return LaurentSeries._raw({e: v for e, v in c.items() if v}, prec)


def ddz(f: LaurentSeries) -> LaurentSeries:
    prec = None if f.prec is None else f.prec - 1
    return LaurentSeries._raw({e - 1: e * v for e, v in f._c.items() if e != 0}, prec)


def residue(f: LaurentSeries) -> Fraction:
    if f.prec is not None and f.prec <= -1:
        raise InsufficientPrecisionError(
            f"residue needs the z^-1 coefficient; series is only known below z^{f.prec}"
        )
    return f._c.get(-1, Fraction(0))


def antiderivative(f: LaurentSeries) -> LaurentSeries:
    r = residue(f)
    if r != 0:
        raise NonIntegrableError(f"z^-1 coefficient {r} has no antiderivative in k((z))")
    prec = None if f.prec is None else f.prec + 1
    return LaurentSeries._raw({e + 1: v / (e + 1) for e, v in f._c.items()}, prec)


def compare(f: LaurentSeries, g: LaurentSeries) -> Optional[bool]:
    """Equality on the overlap of the known windows.

    Returns ``False`` if some known coefficient differs, ``True`` if both
    series are exact and equal, and ``None`` (indeterminate) when they agree
    wherever both are known but at least one of them is inexact.
    """
    prec = _min_prec(f.prec, g.prec)
    keys = set(f._c) | set(g._c)
    for e in keys:
        if prec is not None and e >= prec:
            continue
        if f._c.get(e, 0) != g._c.get(e, 0):
            return False
    if prec is None:
        return True
    return None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _zpow(e: int) -> str:
    return "z" if e == 1 else f"z^{e}"


def format_series(f: LaurentSeries) -> str:
    """Render as ``3/2*z^-1 + 5 - z^2``; inexact series get ``+ O(z^P)``."""
    parts = []
    for e, v in f.items():
        sign = "-" if v < 0 else "+"
        a = abs(v)
        if e == 0:
            body = format_rational(a)
        elif a == 1:
            body = _zpow(e)
        else:
            body = f"{format_rational(a)}*{_zpow(e)}"
        parts.append((sign, body))
    if f.prec is not None:
        parts.append(("+", f"O({_zpow(f.prec) if f.prec != 0 else 'z^0'})"))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


ZERO = LaurentSeries()
ONE = LaurentSeries.constant(1)
Z = LaurentSeries.monomial(1)
