"""The differential polynomial ring k((z))[x0, x1, x2, ...].

The jet variable ``x_i`` stands for the i-th derivative of the unknown
function y(z).  A monomial in the jets is a tuple of ``(index, exponent)``
pairs sorted by index; ``()`` is the monomial 1.  Coefficients are exact
Laurent polynomials, stored flat as ``{(monomial, z_exponent): Fraction}``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Dict, Mapping, Tuple

from .laurent import ONE, ZERO, LaurentSeries, ddz, format_rational, mul

Monomial = Tuple[Tuple[int, int], ...]

__all__ = [
    "Monomial",
    "DiffPoly",
    "mono_mul",
    "mono_degree",
    "mono_order",
    "total_derivative",
    "jet_partial",
    "variational_derivative",
    "substitute_solution",
    "scale_dependent",
    "render",
    "jet_name",
]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for i, p in b:
        d[i] = d.get(i, 0) + p
    return tuple(sorted(d.items()))


def mono_degree(m: Monomial) -> int:
    return sum(p for _, p in m)


def mono_order(m: Monomial) -> int:
    return m[-1][0] if m else -1


def _mono_from(exps: Mapping[int, int]) -> Monomial:
    return tuple(sorted((int(i), int(p)) for i, p in exps.items() if p))


def _merge(dst: dict, key, val):
    s = dst.get(key, 0) + val
    if s:
        dst[key] = s
    else:
        dst.pop(key, None)


class DiffPoly:
    """Immutable element of the jet ring with exact Laurent coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping | None = None):
        t: dict = {}
        if terms:
            for m, c in terms.items():
                m = _mono_from(dict(m)) if not _is_canonical(m) else m
                if isinstance(c, LaurentSeries):
                    if not c.is_exact:
                        raise ValueError("jet-ring coefficients must be exact Laurent polynomials")
                    for e, v in c.items():
                        _merge(t, (m, e), v)
                else:
                    _merge(t, (m, 0), Fraction(c))
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> "DiffPoly":
        obj = cls.__new__(cls)
        obj._t = t
        obj._hash = None
        return obj

    @classmethod
    def from_flat(cls, flat: Mapping) -> "DiffPoly":
        """Build from ``{(monomial, z_exponent): coefficient}``."""
        t: dict = {}
        for (m, e), v in flat.items():
            _merge(t, (m, int(e)), Fraction(v))
        return cls._raw(t)

    @classmethod
    def jet(cls, i: int, power: int = 1) -> "DiffPoly":
        if i < 0:
            raise ValueError("jet index must be non-negative")
        if power == 0:
            return cls.one()
        return cls._raw({(((i, power),), 0): Fraction(1)})

    @classmethod
    def coefficient_poly(cls, c) -> "DiffPoly":
        if isinstance(c, LaurentSeries):
            return cls({(): c})
        return cls({(): Fraction(c)})

    @classmethod
    def zpow(cls, k: int, value=1) -> "DiffPoly":
        return cls.from_flat({((), k): value})

    @classmethod
    def one(cls) -> "DiffPoly":
        return cls._raw({((), 0): Fraction(1)})

    @classmethod
    def zero(cls) -> "DiffPoly":
        return cls._raw({})

    # structure
    @property
    def flat(self) -> dict:
        return dict(self._t)

    @property
    def terms(self) -> Dict[Monomial, LaurentSeries]:
        """Monomial -> Laurent coefficient."""
        grouped: dict = {}
        for (m, e), v in self._t.items():
            grouped.setdefault(m, {})[e] = v
        return {m: LaurentSeries(c) for m, c in sorted(grouped.items(), key=lambda kv: _mono_key(kv[0]))}

    def monomials(self):
        return {m for m, _ in self._t}

    def coefficient(self, m: Monomial) -> LaurentSeries:
        return LaurentSeries({e: v for (mm, e), v in self._t.items() if mm == m})

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def order(self) -> int:
        """Largest jet index present; -1 when no jet occurs."""
        return max((mono_order(m) for m, _ in self._t), default=-1)

    def xdegree(self) -> int:
        return max((mono_degree(m) for m, _ in self._t), default=0)

    def is_x_free(self) -> bool:
        return all(not m for m, _ in self._t)

    def x_free_part(self) -> LaurentSeries:
        return self.coefficient(())

    def is_linear(self) -> bool:
        """Homogeneous of x-degree exactly one (or zero)."""
        return all(mono_degree(m) == 1 for m, _ in self._t)

    def z_support(self) -> Tuple[int, int]:
        es = [e for _, e in self._t]
        return (min(es), max(es)) if es else (0, 0)

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._t)
        for k, v in other._t.items():
            _merge(t, k, v)
        return DiffPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._raw({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, s) -> "DiffPoly":
        s = Fraction(s)
        if s == 0:
            return DiffPoly.zero()
        return DiffPoly._raw({k: s * v for k, v in self._t.items()})

    def shift(self, k: int) -> "DiffPoly":
        """Multiply by z^k."""
        return DiffPoly._raw({(m, e + k): v for (m, e), v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        t: dict = {}
        for (m1, e1), v1 in self._t.items():
            for (m2, e2), v2 in other._t.items():
                _merge(t, (mono_mul(m1, m2), e1 + e2), v1 * v2)
        return DiffPoly._raw(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power in the jet ring")
        out = DiffPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, LaurentSeries)):
            other = DiffPoly.coefficient_poly(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __repr__(self):
        return f"DiffPoly({render(self)!r})"

    def __str__(self):
        return render(self)


def _is_canonical(m) -> bool:
    if not isinstance(m, tuple):
        return False
    prev = -1
    for pair in m:
        if not (isinstance(pair, tuple) and len(pair) == 2):
            return False
        i, p = pair
        if i <= prev or p <= 0:
            return False
        prev = i
    return True


def _coerce(x):
    if isinstance(x, DiffPoly):
        return x
    if isinstance(x, (int, Fraction, LaurentSeries)):
        return DiffPoly.coefficient_poly(x)
    return NotImplemented


def _mono_key(m: Monomial):
    return (mono_degree(m), tuple((-i, p) for i, p in m))


def _term_key(k):
    m, e = k
    return (_mono_key(m), -e)


# --- derivations -----------------------------------------------------------


def total_derivative(D: DiffPoly) -> DiffPoly:
    """d/dz on coefficients plus x_i -> x_{i+1} on jets (Leibniz)."""
    t: dict = {}
    for (m, e), v in D._t.items():
        if e:
            _merge(t, (m, e - 1), e * v)
        for idx, (i, p) in enumerate(m):
            d = dict(m)
            if p == 1:
                del d[i]
            else:
                d[i] = p - 1
            d[i + 1] = d.get(i + 1, 0) + 1
            _merge(t, (tuple(sorted(d.items())), e), p * v)
    return DiffPoly._raw(t)


def total_derivative_n(D: DiffPoly, n: int) -> DiffPoly:
    for _ in range(n):
        if D.is_zero():
            break
        D = total_derivative(D)
    return D


def jet_partial(D: DiffPoly, i: int) -> DiffPoly:
    t: dict = {}
    for (m, e), v in D._t.items():
        d = dict(m)
        p = d.get(i)
        if not p:
            continue
        if p == 1:
            del d[i]
        else:
            d[i] = p - 1
        _merge(t, (tuple(sorted(d.items())), e), p * v)
    return DiffPoly._raw(t)


def variational_derivative(D: DiffPoly) -> DiffPoly:
    out = DiffPoly.zero()
    for i in range(D.order() + 1):
        part = total_derivative_n(jet_partial(D, i), i)
        out = out + part if i % 2 == 0 else out - part
    return out


def substitute_solution(D: DiffPoly, gamma: LaurentSeries) -> LaurentSeries:
    """Evaluate D at x_i = i-th derivative of ``gamma``."""
    r = D.order()
    derivs = [gamma]
    for _ in range(r):
        derivs.append(ddz(derivs[-1]))
    powers: dict = {}

    def power(i, p):
        key = (i, p)
        if key not in powers:
            powers[key] = derivs[i] ** p
        return powers[key]

    out = ZERO
    for m, c in D.terms.items():
        val = reduce(mul, (power(i, p) for i, p in m), ONE)
        out = out + mul(c, val)
    return out


def scale_dependent(D: DiffPoly) -> Dict[int, DiffPoly]:
    """D(z, t*x0, t*x1, ...) as ``{power of t: coefficient in the jet ring}``."""
    parts: dict = {}
    for (m, e), v in D._t.items():
        parts.setdefault(mono_degree(m), {})[(m, e)] = v
    return {d: DiffPoly._raw(t) for d, t in sorted(parts.items())}


# --- rendering -------------------------------------------------------------


def jet_name(i: int) -> str:
    if i <= 3:
        return "y" + "'" * i
    return f"y^({i})"


def _render_mono(m: Monomial) -> list:
    out = []
    for i, p in m:
        out.append(jet_name(i) if p == 1 else f"{jet_name(i)}^{p}")
    return out


def render(D: DiffPoly) -> str:
    """Render in the textual grammar accepted by :mod:`varform.parser`."""
    if D.is_zero():
        return "0"
    pieces = []
    for k in sorted(D._t, key=_term_key):
        m, e = k
        v = D._t[k]
        factors = []
        a = abs(v)
        if e:
            factors.append("z" if e == 1 else f"z^{e}")
        factors += _render_mono(m)
        if a != 1 or not factors:
            factors.insert(0, format_rational(a))
        pieces.append(("-" if v < 0 else "+", "*".join(factors)))
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out

