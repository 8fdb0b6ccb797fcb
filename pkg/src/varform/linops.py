"""Linear differential operators over k((z)).

``LinOp(coeffs)`` is the operator sum_i coeffs[i] * (d/dz)^i.  The module also
covers formal adjoints for the residue pairing, linearisation of a nonlinear
equation at a solution, and truncated kernel/cokernel dimensions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Sequence, Tuple

from .diffpoly import DiffPoly, jet_partial, substitute_solution
from .laurent import ZERO, LaurentSeries, ddz, mul, residue

__all__ = [
    "LinOp",
    "CohomologyWindow",
    "CohomologyDims",
    "UniversalLinearisation",
    "apply",
    "compose",
    "adjoint",
    "is_self_adjoint",
    "residue_pairing",
    "linearize_at",
    "universal_linearization",
    "tangent_cohomology_dims",
    "rank_qq",
    "DISC",
    "PUNCTURED",
]

DISC = "disc"
PUNCTURED = "punctured"


def _nth_derivative(f: LaurentSeries, n: int) -> LaurentSeries:
    for _ in range(n):
        f = ddz(f)
    return f


class LinOp:
    """Immutable operator sum a_i d^i with Laurent coefficients."""

    __slots__ = ("_a",)

    def __init__(self, coeffs: Sequence = ()):
        a = [c if isinstance(c, LaurentSeries) else LaurentSeries.constant(c) for c in coeffs]
        while a and a[-1].is_zero():
            a.pop()
        self._a = tuple(a)

    @classmethod
    def d(cls, n: int = 1) -> "LinOp":
        return cls([0] * n + [1])

    @classmethod
    def multiplication(cls, c) -> "LinOp":
        return cls([c])

    @classmethod
    def from_diffpoly(cls, D: DiffPoly) -> "LinOp":
        """The operator of a linear element sum a_k x_k of the jet ring."""
        if not D.is_linear():
            raise ValueError("only a homogeneous linear element defines an operator")
        return cls([D.coefficient(((k, 1),)) for k in range(D.order() + 1)])

    def to_diffpoly(self) -> DiffPoly:
        return DiffPoly({((k, 1),): c for k, c in enumerate(self._a) if not c.is_zero()})

    @property
    def coeffs(self) -> Tuple[LaurentSeries, ...]:
        return self._a

    def order(self) -> int:
        return len(self._a) - 1

    def is_zero(self) -> bool:
        return not self._a

    def __getitem__(self, i: int) -> LaurentSeries:
        return self._a[i] if 0 <= i < len(self._a) else ZERO

    def __add__(self, other: "LinOp") -> "LinOp":
        n = max(len(self._a), len(other._a))
        return LinOp([self[i] + other[i] for i in range(n)])

    def __neg__(self) -> "LinOp":
        return LinOp([-c for c in self._a])

    def __sub__(self, other: "LinOp") -> "LinOp":
        return self + (-other)

    def scale(self, s) -> "LinOp":
        return LinOp([c.scale(s) for c in self._a])

    def __matmul__(self, other: "LinOp") -> "LinOp":
        return compose(self, other)

    def __call__(self, f: LaurentSeries) -> LaurentSeries:
        return apply(self, f)

    def __eq__(self, other):
        if not isinstance(other, LinOp):
            return NotImplemented
        return self._a == other._a

    def __hash__(self):
        return hash(self._a)

    def __repr__(self):
        return f"LinOp({self.format()!r})"

    def format(self) -> str:
        """Semicolon list, lowest order first: ``-1; z + 2``."""
        if not self._a:
            return "0"
        return "; ".join(str(c) for c in self._a)


def apply(L: LinOp, f: LaurentSeries) -> LaurentSeries:
    out = ZERO
    deriv = f
    for i, a in enumerate(L.coeffs):
        if i:
            deriv = ddz(deriv)
        if not a.is_zero():
            out = out + mul(a, deriv)
    return out


def compose(L: LinOp, M: LinOp) -> LinOp:
    """L o M, normal-ordered with the Leibniz rule."""
    n = L.order() + M.order() + 1
    if L.is_zero() or M.is_zero():
        return LinOp()
    out = [ZERO] * (n + 1)
    for i, a in enumerate(L.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(M.coeffs):
            if b.is_zero():
                continue
            # a d^i (b d^j) = a sum_k C(i,k) b^(k) d^(i-k+j)
            bk = b
            for k in range(i + 1):
                if k:
                    bk = ddz(bk)
                if bk.is_zero():
                    break
                out[i - k + j] = out[i - k + j] + mul(a, bk).scale(comb(i, k))
    return LinOp(out)


def adjoint(L: LinOp) -> LinOp:
    """Formal adjoint sum (-1)^i d^i o a_i.

    b_j = sum_{i >= j} (-1)^i C(i, j) a_i^{(i-j)}.
    """
    n = len(L.coeffs)
    out = []
    for j in range(n):
        acc = ZERO
        for i in range(j, n):
            term = _nth_derivative(L[i], i - j).scale(comb(i, j))
            acc = acc + term if i % 2 == 0 else acc - term
        out.append(acc)
    return LinOp(out)


def is_self_adjoint(L: LinOp) -> bool:
    return adjoint(L) == L


def residue_pairing(f: LaurentSeries, g: LaurentSeries) -> Fraction:
    return residue(mul(f, g))


def linearize_at(D: DiffPoly, gamma: LaurentSeries, check: bool = True) -> LinOp:
    """The epsilon-coefficient of D(gamma + eps*y) as an operator in y."""
    if check:
        r = substitute_solution(D, gamma)
        if r.items():
            warnings.warn(
                f"linearising at a non-solution: D(gamma) = {r}", RuntimeWarning, stacklevel=2
            )
    return LinOp([substitute_solution(jet_partial(D, i), gamma) for i in range(D.order() + 1)])


@dataclass(frozen=True)
class UniversalLinearisation:
    """Coefficient of d^i is the jet partial of D with respect to x_i."""

    coeffs: Tuple[DiffPoly, ...]

    def at(self, gamma: LaurentSeries) -> LinOp:
        return LinOp([substitute_solution(c, gamma) for c in self.coeffs])

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)


def universal_linearization(D: DiffPoly) -> UniversalLinearisation:
    return UniversalLinearisation(tuple(jet_partial(D, i) for i in range(D.order() + 1)))


# --- truncated tangent cohomology -------------------------------------------


@dataclass(frozen=True)
class CohomologyWindow:
    """Monomial basis z^low .. z^high of the truncated domain."""

    low: int
    high: int


@dataclass(frozen=True)
class CohomologyDims:
    h0: int
    h1: int
    window_used: CohomologyWindow
    stabilized: bool


def rank_qq(rows: List[List[Fraction]]) -> int:
    """Rank over Q by Gaussian elimination on exact fractions."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        inv = 1 / p[col]
        for r in range(rank + 1, len(m)):
            f = m[r][col]
            if f:
                f = f * inv
                row = m[r]
                for c in range(col, ncols):
                    if p[c]:
                        row[c] -= f * p[c]
        rank += 1
        if rank == len(m):
            break
    return rank


def _falling(a: int, i: int) -> int:
    out = 1
    for k in range(i):
        out *= a - k
    return out


def _shift_range(L: LinOp) -> Tuple[int, int]:
    shifts = [e - i for i, c in enumerate(L.coeffs) for e, _ in c.items()]
    return min(shifts), max(shifts)


def _dims(L: LinOp, space: str, low: int, high: int) -> Tuple[int, int]:
    s_min, _ = _shift_range(L)
    # target rows depend only on domain columns <= high; rows below the
    # image of z^low are unreachable on the disc only
    t_high = high + s_min
    t_low = 0 if space == DISC else low + s_min
    cols = list(range(low, high + 1))
    nrows = t_high - t_low + 1
    if nrows <= 0:
        return len(cols), 0
    rows = [[Fraction(0)] * len(cols) for _ in range(nrows)]
    for ci, a in enumerate(cols):
        for i, c in enumerate(L.coeffs):
            ff = _falling(a, i)
            if ff == 0:
                continue
            for e, v in c.items():
                b = a - i + e
                if t_low <= b <= t_high:
                    rows[b - t_low][ci] += ff * v
    r = rank_qq(rows)
    return len(cols) - r, nrows - r


def tangent_cohomology_dims(L: LinOp, space: str = DISC, window: int | CohomologyWindow = 16,
                            enlarge: int = 5) -> CohomologyDims:
    """Kernel and cokernel dimensions of L on k[[z]] (disc) or k((z)) (punctured).

    The domain is truncated to z^low .. z^high (low = 0 on the disc, -high on
    the punctured disc when ``window`` is an int) and the target to the
    exponents whose coefficients depend only on those columns.  The result
    is marked stabilized when the same dimensions come out with the window
    enlarged by ``enlarge`` on each free side.
    """
    if space not in (DISC, PUNCTURED):
        raise ValueError(f"space must be {DISC!r} or {PUNCTURED!r}")
    for c in L.coeffs:
        if not c.is_exact:
            raise ValueError("tangent cohomology needs exact Laurent-polynomial coefficients")
        if space == DISC and c.items() and c.valuation() < 0:
            raise ValueError("on the disc the coefficients must be polynomials in z")
    if isinstance(window, int):
        window = CohomologyWindow(0 if space == DISC else -window, window)
    if space == DISC and window.low != 0:
        raise ValueError("the disc window starts at z^0")
    if L.is_zero():
        n = window.high - window.low + 1
        return CohomologyDims(n, n, window, False)
    h = _dims(L, space, window.low, window.high)
    big_low = window.low if space == DISC else window.low - enlarge
    h_big = _dims(L, space, big_low, window.high + enlarge)
    return CohomologyDims(h[0], h[1], window, h == h_big)
