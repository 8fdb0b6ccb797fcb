"""Seeded random generators for test batteries.

Every generator takes an explicit :class:`random.Random` so batteries are
reproducible from a single seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Tuple

from .diffpoly import DiffPoly, variational_derivative
from .laurent import LaurentSeries
from .linops import LinOp, adjoint

DEFAULT_SEED = 20240601


def rng_from(seed=None) -> random.Random:
    return random.Random(DEFAULT_SEED if seed is None else seed)


def rational(rng: random.Random, num: int = 5, den: int = 3) -> Fraction:
    while True:
        q = Fraction(rng.randint(-num, num), rng.randint(1, den))
        if q:
            return q


def laurent_poly(rng: random.Random, lo: int = -3, hi: int = 3, nterms: int = 3) -> LaurentSeries:
    return LaurentSeries({rng.randint(lo, hi): rational(rng) for _ in range(rng.randint(1, nterms))})


def monomial(rng: random.Random, order: int, degree: int):
    d = rng.randint(1, degree)
    exps: dict = {}
    for _ in range(d):
        i = rng.randint(0, order)
        exps[i] = exps.get(i, 0) + 1
    return tuple(sorted(exps.items()))


def diffpoly(rng: random.Random, order: int = 3, degree: int = 3, lo: int = -3, hi: int = 3,
             nterms: int = 4, x_free: bool = True) -> DiffPoly:
    """Random element of the jet ring with Laurent-polynomial coefficients."""
    flat: dict = {}
    for _ in range(rng.randint(1, nterms)):
        m = monomial(rng, order, degree)
        key = (m, rng.randint(lo, hi))
        flat[key] = flat.get(key, 0) + rational(rng)
    if x_free and rng.random() < 0.5:
        key = ((), rng.randint(lo, hi))
        flat[key] = flat.get(key, 0) + rational(rng)
    return DiffPoly.from_flat(flat)


def linop(rng: random.Random, max_order: int = 4, lo: int = -3, hi: int = 3) -> LinOp:
    n = rng.randint(0, max_order)
    coeffs = [laurent_poly(rng, lo, hi) if rng.random() < 0.8 else LaurentSeries() for _ in range(n)]
    coeffs.append(laurent_poly(rng, lo, hi))
    return LinOp(coeffs)


def self_adjoint_linop(rng: random.Random, max_order: int = 3, lo: int = -2, hi: int = 2) -> LinOp:
    """(L + L*)/2 for a random L, retried until nonzero."""
    while True:
        L = linop(rng, max_order, lo, hi)
        S = (L + adjoint(L)).scale(Fraction(1, 2))
        if not S.is_zero():
            return S


def variational_equation(rng: random.Random, lo: int = -2, hi: int = 2) -> Tuple[DiffPoly, DiffPoly]:
    """(A, delta A) with A of order <= 1, so delta A has order <= 2."""
    while True:
        A = diffpoly(rng, order=1, degree=4, lo=lo, hi=hi, nterms=3)
        D = variational_derivative(A)
        if not D.is_x_free():
            return A, D


_PERTURBATIONS = ["y'", "z*y'", "y*y'", "y'''", "z^-1*y*y'", "y'^3", "z^2*y''' + y'", "y*y''"]


def perturbed_equation(rng: random.Random, lo: int = -2, hi: int = 2) -> DiffPoly:
    """delta A plus a term that breaks the Helmholtz conditions."""
    from .parser import parse_poly
    from .varcalc import helmholtz_check

    while True:
        _, D = variational_equation(rng, lo, hi)
        P = parse_poly(rng.choice(_PERTURBATIONS)).scale(rational(rng))
        E = D + P
        if not helmholtz_check(E).passed and E.order() <= 3:
            return E


def linear_equation(rng: random.Random, max_order: int = 3, self_adjoint: bool = False) -> DiffPoly:
    L = self_adjoint_linop(rng, max_order) if self_adjoint else linop(rng, max_order, -2, 2)
    return L.to_diffpoly()


def theorem_battery(rng: random.Random, per_kind: int = 10) -> List[Tuple[str, DiffPoly]]:
    out = []
    for _ in range(per_kind):
        out.append(("variational", variational_equation(rng)[1]))
    for _ in range(per_kind):
        out.append(("perturbed", perturbed_equation(rng)))
    for k in range(per_kind):
        out.append(("linear", linear_equation(rng, 3, self_adjoint=k % 2 == 0)))
    return out
