"""Inverse problem of the calculus of variations in the jet ring."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict

from .diffpoly import (
    DiffPoly,
    jet_partial,
    scale_dependent,
    total_derivative_n,
    variational_derivative,
)
from .errors import InconsistencyError
from .laurent import residue
from .linops import LinOp

__all__ = [
    "HelmholtzReport",
    "LagrangianResult",
    "helmholtz_check",
    "vainberg_tonti",
    "is_variational",
    "is_total_derivative",
    "equivalent_mod_total_derivative",
    "quadratic_action",
]


@dataclass(frozen=True)
class HelmholtzReport:
    residuals: Dict[int, DiffPoly] = field(default_factory=dict)
    passed: bool = True

    def failing_levels(self):
        return [l for l, r in self.residuals.items() if not r.is_zero()]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "residuals": [{"level": l, "poly": str(r)} for l, r in self.residuals.items()],
        }


@dataclass(frozen=True)
class LagrangianResult:
    lagrangian: DiffPoly
    verified: bool

    def to_json(self) -> dict:
        return {"lagrangian": str(self.lagrangian), "verified": self.verified}


def helmholtz_check(D: DiffPoly) -> HelmholtzReport:
    """Residuals of the Helmholtz conditions at levels 1..order(D).

    Level l compares (1 + (-1)^(l+1)) d_l D with
    sum_{k>l} (-1)^k C(k, l) Dz^(k-l) d_k D.
    """
    r = D.order()
    partials = [jet_partial(D, k) for k in range(r + 1)]
    residuals = {}
    for l in range(1, r + 1):
        res = partials[l].scale(1 + (-1) ** (l + 1))
        for k in range(l + 1, r + 1):
            if partials[k].is_zero():
                continue
            term = total_derivative_n(partials[k], k - l).scale((-1) ** k * comb(k, l))
            res = res - term
        residuals[l] = res
    passed = all(v.is_zero() for v in residuals.values())
    return HelmholtzReport(residuals=residuals, passed=passed)


def vainberg_tonti(D: DiffPoly) -> LagrangianResult:
    """x0 * integral_0^1 D(z, t*x) dt, done exactly per homogeneous part."""
    lag = DiffPoly.zero()
    for d, part in scale_dependent(D).items():
        lag = lag + part.scale(Fraction(1, d + 1))
    lag = lag * DiffPoly.jet(0)
    return LagrangianResult(lagrangian=lag, verified=variational_derivative(lag) == D)


def is_variational(D: DiffPoly) -> bool:
    helm = helmholtz_check(D)
    vt = vainberg_tonti(D)
    if helm.passed != vt.verified:
        raise InconsistencyError(
            f"Helmholtz conditions {'pass' if helm.passed else 'fail'} but the "
            f"Vainberg-Tonti Lagrangian is {'verified' if vt.verified else 'not verified'} for {D}"
        )
    return helm.passed


def is_total_derivative(D: DiffPoly) -> bool:
    # ker(delta) = im(Dz) + k*z^-1; the z^-1 class is read off the x-free part
    if not variational_derivative(D).is_zero():
        return False
    return residue(D.x_free_part()) == 0


def equivalent_mod_total_derivative(P: DiffPoly, Q: DiffPoly) -> bool:
    return is_total_derivative(P - Q)


def quadratic_action(L: LinOp) -> DiffPoly:
    """(1/2) sum_i a_i x0 x_i."""
    out = DiffPoly.zero()
    x0 = DiffPoly.jet(0)
    for i, a in enumerate(L.coeffs):
        if a.is_zero():
            continue
        out = out + DiffPoly.coefficient_poly(a) * x0 * DiffPoly.jet(i)
    return out.scale(Fraction(1, 2))
