"""Shared fixtures and a sympy bridge used as an independent oracle."""

import sys
from fractions import Fraction

import pytest
import sympy as sp

from varform import DiffPoly, LaurentSeries, LinOp
from varform.sampling import rng_from

z = sp.Symbol("z")
Y = sp.Function("y")


def to_sympy_series(f: LaurentSeries):
    return sum((sp.Rational(v.numerator, v.denominator) * z**e for e, v in f.items()), sp.Integer(0))


def from_sympy_series(expr) -> LaurentSeries:
    expr = sp.expand(expr)
    coeffs = {}
    for term in sp.Add.make_args(expr):
        if term == 0:
            continue
        c, e = term.as_coeff_exponent(z)
        coeffs[int(e)] = coeffs.get(int(e), 0) + Fraction(int(sp.numer(c)), int(sp.denom(c)))
    return LaurentSeries(coeffs)


def to_sympy_jets(D: DiffPoly):
    """D as an expression in z and the derivatives of y(z)."""
    out = sp.Integer(0)
    for (m, e), v in D.flat.items():
        term = sp.Rational(v.numerator, v.denominator) * z**e
        for i, p in m:
            term *= sp.diff(Y(z), z, i) ** p
        out += term
    return out


def from_sympy_jets(expr, max_order: int = 12) -> DiffPoly:
    """Inverse of :func:`to_sympy_jets` (replace derivatives by plain symbols)."""
    xs = sp.symbols(f"x0:{max_order + 1}")
    for i in range(max_order, -1, -1):
        expr = expr.subs(sp.diff(Y(z), z, i) if i else Y(z), xs[i])
    poly = sp.Poly(sp.expand(expr * z ** 40), *xs, z)
    flat = {}
    for monom, c in poly.terms():
        m = tuple((i, p) for i, p in enumerate(monom[:-1]) if p)
        flat[(m, monom[-1] - 40)] = Fraction(int(sp.numer(c)), int(sp.denom(c)))
    return DiffPoly.from_flat(flat)


def sympy_apply(L: LinOp, f_expr):
    return sum((to_sympy_series(a) * sp.diff(f_expr, z, i) for i, a in enumerate(L.coeffs)), sp.Integer(0))


@pytest.fixture
def rng():
    return rng_from(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s[7:9])):
            terminalreporter.write_line(line)
