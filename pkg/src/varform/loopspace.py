"""Coefficient functions of a differential polynomial on the truncated loop space.

Substituting ``y(z) = sum_{i=low..high} y_i z^i`` into D and collecting powers
of z gives polynomials D_n in the loop variables y_i.  Dropping the variables
above ``high`` only disturbs exponents above a computable bound, so each
expansion carries the range of exponents on which it is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .diffpoly import (
    DiffPoly,
    Monomial,
    jet_partial,
    mono_degree,
    mono_mul,
    total_derivative,
    variational_derivative,
)
from .errors import EmptyExactRangeError, OrderTooHighError, WindowError
from .laurent import format_rational

__all__ = [
    "Window",
    "LoopPoly",
    "LoopExpansion",
    "ELReport",
    "ClosednessReport",
    "exact_range",
    "expand_on_loops",
    "partial_wrt",
    "euler_lagrange_identity_check",
    "symplectic_closedness_check",
    "cross_integrability",
    "order2_integrand",
]


@dataclass(frozen=True)
class Window:
    """Loop variables y_low .. y_high; the exact range is filled in per D."""

    low: int
    high: int
    exact_low: Optional[int] = None
    exact_high: Optional[int] = None

    def __post_init__(self):
        if self.low > self.high:
            raise WindowError(f"empty window [{self.low}, {self.high}]")

    @classmethod
    def parse(cls, text: str) -> "Window":
        """``"-3:12"`` -> Window(-3, 12)."""
        try:
            lo, hi = text.split(":")
            return cls(int(lo), int(hi))
        except ValueError:
            raise WindowError(f"window must look like LOW:HIGH, got {text!r}") from None

    def indices(self) -> range:
        return range(self.low, self.high + 1)

    def in_exact(self, n: int) -> bool:
        return self.exact_low <= n <= self.exact_high


def exact_range(D: DiffPoly, low: int, high: int) -> Tuple[int, int]:
    """Exponents n for which D_n does not see the cutoff at ``high``.

    A term c*z^e*x_{k1}...x_{kd} contributes to exponents at least
    e + sum(low - k); if one factor uses a variable above ``high`` the
    exponent is at least e + (high + 1) + (d - 1)*low - sum(k).
    """
    flat = D.flat
    if D.is_x_free():
        es = [e for _, e in flat] or [0]
        return min(min(es), -1 - high), max(max(es), -1 - low)
    r = D.order()
    d = D.xdegree()
    v_min = min(e for _, e in flat)
    lows = [d * (low - r) + v_min]
    highs = []
    for m, e in flat:
        dm = mono_degree(m)
        ks = sum(i * p for i, p in m)
        lows.append(e + dm * low - ks)
        if dm:
            highs.append(e + high + (dm - 1) * low - ks)
    return min(lows), min(highs)


# --- loop polynomials ------------------------------------------------------


def _merge(dst: dict, key, val):
    s = dst.get(key, 0) + val
    if s:
        dst[key] = s
    else:
        dst.pop(key, None)


def _loop_key(m: Monomial):
    return (mono_degree(m), m)


def _var(i: int) -> str:
    return f"y[{i}]"


class LoopPoly:
    """Polynomial with rational coefficients in the loop variables y_i."""

    __slots__ = ("_t", "window")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, window: Optional[Tuple[int, int]] = None):
        t: dict = {}
        for m, v in (terms or {}).items():
            _merge(t, tuple(sorted(m)), Fraction(v))
        self._t = t
        self.window = window

    @classmethod
    def _raw(cls, t: dict, window=None) -> "LoopPoly":
        obj = cls.__new__(cls)
        obj._t = t
        obj.window = window
        return obj

    @classmethod
    def var(cls, i: int, window=None) -> "LoopPoly":
        return cls._raw({((i, 1),): Fraction(1)}, window)

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def variables(self) -> set:
        return {i for m in self._t for i, _ in m}

    def __add__(self, other: "LoopPoly") -> "LoopPoly":
        t = dict(self._t)
        for k, v in other._t.items():
            _merge(t, k, v)
        return LoopPoly._raw(t, self.window or other.window)

    def __neg__(self):
        return LoopPoly._raw({k: -v for k, v in self._t.items()}, self.window)

    def __sub__(self, other: "LoopPoly") -> "LoopPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return LoopPoly._raw({}, self.window)
            return LoopPoly._raw({k: v * other for k, v in self._t.items()}, self.window)
        return LoopPoly._raw(_pmul(self._t, other._t), self.window or other.window)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LoopPoly({(): other}) if other else LoopPoly()
        if not isinstance(other, LoopPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __repr__(self):
        return f"LoopPoly({str(self)!r})"

    def __str__(self):
        if not self._t:
            return "0"
        out = ""
        for m in sorted(self._t, key=_loop_key):
            v = self._t[m]
            factors = [_var(i) if p == 1 else f"{_var(i)}^{p}" for i, p in m]
            a = abs(v)
            if a != 1 or not factors:
                factors.insert(0, format_rational(a))
            body = "*".join(factors)
            if not out:
                out = ("-" if v < 0 else "") + body
            else:
                out += (" - " if v < 0 else " + ") + body
        return out


def _pmul(a: dict, b: dict) -> dict:
    t: dict = {}
    for m1, v1 in a.items():
        for m2, v2 in b.items():
            _merge(t, mono_mul(m1, m2), v1 * v2)
    return t


def partial_wrt(P: LoopPoly, j: int, window: Optional[Tuple[int, int]] = None) -> LoopPoly:
    win = window or P.window
    if win is not None and not (win[0] <= j <= win[1]):
        raise WindowError(f"loop index {j} outside window [{win[0]}, {win[1]}]")
    t: dict = {}
    for m, v in P._t.items():
        d = dict(m)
        p = d.get(j)
        if not p:
            continue
        if p == 1:
            del d[j]
        else:
            d[j] = p - 1
        _merge(t, tuple(sorted(d.items())), p * v)
    return LoopPoly._raw(t, win)


# --- expansion -------------------------------------------------------------


@dataclass(frozen=True)
class LoopExpansion:
    coeffs: Dict[int, LoopPoly]
    window: Window
    x_free: bool = False

    def coeff(self, n: int) -> LoopPoly:
        w = self.window
        if n > w.exact_high and not self.x_free:
            raise EmptyExactRangeError(
                f"D_{n} is not exact for loop window [{w.low}, {w.high}] "
                f"(exact up to n = {w.exact_high})"
            )
        return self.coeffs.get(n, LoopPoly._raw({}, (w.low, w.high)))

    __getitem__ = coeff

    def alpha(self) -> LoopPoly:
        """The residue functional: coefficient at z^-1."""
        return self.coeff(-1)


def _series_mul(A: dict, B: dict, cap: int) -> dict:
    out: dict = {}
    for e1, p1 in A.items():
        for e2, p2 in B.items():
            e = e1 + e2
            if e > cap:
                continue
            acc = out.setdefault(e, {})
            for m1, v1 in p1.items():
                for m2, v2 in p2.items():
                    _merge(acc, mono_mul(m1, m2), v1 * v2)
    return {e: p for e, p in out.items() if p}


def _jet_series(k: int, low: int, high: int) -> dict:
    # x_k -> sum_i i(i-1)...(i-k+1) y_i z^(i-k)
    s = {}
    for i in range(low, high + 1):
        ff = 1
        for t in range(k):
            ff *= i - t
        if ff:
            s[i - k] = {((i, 1),): Fraction(ff)}
    return s


def expand_on_loops(D: DiffPoly, window: Window, upto: Optional[int] = None) -> LoopExpansion:
    """Coefficients D_n for n in the exact range of ``window``.

    ``upto`` additionally keeps the truncated (y_k = 0 for k > high)
    coefficients up to that exponent in ``coeffs``; :meth:`LoopExpansion.coeff`
    still refuses them.
    """
    low, high = window.low, window.high
    lo, hi = exact_range(D, low, high)
    if lo > hi:
        raise EmptyExactRangeError(
            f"window [{low}, {high}] is too small for {D}: exact range would be [{lo}, {hi}]"
        )
    win = replace(window, exact_low=lo, exact_high=hi)
    bases: dict = {}
    out: Dict[int, dict] = {}
    for m, c in D.terms.items():
        v_lo = c.valuation()
        top = hi if upto is None else max(hi, upto)
        cap = top - v_lo
        factors: List[int] = [i for i, p in m for _ in range(p)]
        mins = [low - k for k in factors]
        prod = {0: {(): Fraction(1)}}
        for idx, k in enumerate(factors):
            if k not in bases:
                bases[k] = _jet_series(k, low, high)
            rest = sum(mins[idx + 1:])
            prod = _series_mul(prod, bases[k], cap - rest)
        for e, v in c.items():
            for n, p in prod.items():
                if lo <= n + e <= top:
                    acc = out.setdefault(n + e, {})
                    for mm, vv in p.items():
                        _merge(acc, mm, v * vv)
    w = (low, high)
    coeffs = {n: LoopPoly._raw(t, w) for n, t in sorted(out.items()) if t}
    return LoopExpansion(coeffs=coeffs, window=win, x_free=D.is_x_free())


# --- Euler-Lagrange identity and closedness -------------------------------


@dataclass(frozen=True)
class ELReport:
    passed: bool
    checked: List[int] = field(default_factory=list)
    failed: List[int] = field(default_factory=list)
    unchecked: List[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "checked_indices": self.checked,
            "failed_indices": self.failed,
            "unchecked_indices": self.unchecked,
        }


def euler_lagrange_identity_check(D: DiffPoly, window: Window) -> ELReport:
    """d(alpha_D)/dy_i == (delta D)_{-1-i} for every index where both sides are exact."""
    lhs_exp = expand_on_loops(D, window)
    if not lhs_exp.window.in_exact(-1) and not lhs_exp.x_free:
        raise EmptyExactRangeError(f"z^-1 coefficient of {D} is not exact in this window")
    alpha = lhs_exp.alpha()
    rhs_exp = expand_on_loops(variational_derivative(D), window)
    rw = rhs_exp.window
    checked, failed, unchecked = [], [], []
    for i in window.indices():
        n = -1 - i
        if not (rw.in_exact(n) or rhs_exp.x_free):
            unchecked.append(i)
            continue
        checked.append(i)
        if partial_wrt(alpha, i, (window.low, window.high)) != rhs_exp.coeff(n):
            failed.append(i)
    return ELReport(passed=not failed, checked=checked, failed=failed, unchecked=unchecked)


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    lhs: LoopPoly
    rhs: LoopPoly

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "lhs": str(self.lhs), "rhs": str(self.rhs)}


@dataclass(frozen=True)
class ClosednessReport:
    passed: bool
    checked_pairs: int
    unchecked_pairs: int
    violation: Optional[Violation] = None

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "checked_pairs": self.checked_pairs,
            "unchecked_pairs": self.unchecked_pairs,
            "violation": self.violation.to_json() if self.violation else None,
        }


def symplectic_closedness_check(D: DiffPoly, window: Window, all_pairs: bool = False) -> ClosednessReport:
    """Symmetry dD_{-1-i}/dy_j == dD_{-1-j}/dy_i over unordered pairs i < j.

    Pairs with an inexact coefficient are counted as unchecked, never failed.
    With ``all_pairs`` every pair in the window is compared: the truncated
    D_n are the true ones with y_k = 0 for k > high, and that restriction
    commutes with d/dy_j for j <= high, so a mismatch is still a genuine
    violation (a pass, however, only covers the truncated stage).
    """
    exp = expand_on_loops(D, window, upto=-1 - window.low if all_pairs else None)
    w = exp.window
    win = (window.low, window.high)
    idx = list(window.indices())
    ok = [i for i in idx if all_pairs or exp.x_free or w.in_exact(-1 - i)]
    total = len(idx) * (len(idx) - 1) // 2
    checked = 0
    okset = set(ok)
    zero = LoopPoly._raw({}, win)
    for a, i in enumerate(idx):
        if i not in okset:
            continue
        for j in idx[a + 1:]:
            if j not in okset:
                continue
            checked += 1
            lhs = partial_wrt(exp.coeffs.get(-1 - i, zero), j, win)
            rhs = partial_wrt(exp.coeffs.get(-1 - j, zero), i, win)
            if lhs != rhs:
                return ClosednessReport(False, checked, total - checked, Violation(i, j, lhs, rhs))
    return ClosednessReport(True, checked, total - checked, None)


def cross_integrability(D: DiffPoly, i: int, j: int, window: Window) -> LoopPoly:
    """z^-1 coefficient of z^j delta(z^i D) - z^i delta(z^j D) on the loop window."""
    E = variational_derivative(D.shift(i)).shift(j) - variational_derivative(D.shift(j)).shift(i)
    exp = expand_on_loops(E, window)
    if not (exp.x_free or exp.window.in_exact(-1)):
        raise EmptyExactRangeError(f"z^-1 coefficient of the ({i}, {j}) integrand is not exact")
    return exp.coeff(-1)


def order2_integrand(D: DiffPoly, i: int, j: int) -> DiffPoly:
    """(j-i) z^(i+j-1) d1 D + 2(i-j) z^(i+j-1) Dz(d2 D) + (i(i-1)-j(j-1)) z^(i+j-2) d2 D."""
    if D.order() > 2:
        raise OrderTooHighError(f"order {D.order()} > 2")
    d1 = jet_partial(D, 1)
    d2 = jet_partial(D, 2)
    s = i + j
    return (
        d1.shift(s - 1).scale(j - i)
        + total_derivative(d2).shift(s - 1).scale(2 * (i - j))
        + d2.shift(s - 2).scale(i * (i - 1) - j * (j - 1))
    )
