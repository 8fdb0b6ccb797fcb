"""Acceptance criteria, one PASS/FAIL line each.

All comparisons are exact over Q (tolerance zero). Windowed criteria use the
windows pinned below. Run ``pytest tests/test_acceptance.py`` to get the
summary block at the end of the session, or execute this file directly.
"""

import sys

import pytest

from varform import (
    LaurentSeries,
    LinOp,
    Window,
    adjoint,
    apply,
    cross_integrability,
    euler_lagrange_identity_check,
    expand_on_loops,
    helmholtz_check,
    is_self_adjoint,
    linearize_at,
    order2_integrand,
    parse_poly,
    parse_series,
    quadratic_action,
    residue_pairing,
    symplectic_closedness_check,
    tangent_cohomology_dims,
    total_derivative,
    vainberg_tonti,
    variational_derivative,
)
from varform.laurent import ddz
from varform.linops import DISC
from varform.sampling import (
    DEFAULT_SEED,
    diffpoly,
    laurent_poly,
    linear_equation,
    linop,
    rng_from,
    self_adjoint_linop,
    theorem_battery,
    variational_equation,
)

LOOP_WINDOW = Window(-3, 12)
TANGENT_M = 16
N_DELTA = 100
N_EL = 20
PER_KIND = 10
N_ADJOINT = 100
N_LINEAR = 20
N_ORDER2 = 10

RESULTS: list = []


def _record(n, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}"
    if detail:
        line += f" ({detail})"
    RESULTS.append(line)
    return ok


def _battery():
    return theorem_battery(rng_from(DEFAULT_SEED), per_kind=PER_KIND)


def test_01_delta_kills_total_derivatives():
    rng = rng_from(DEFAULT_SEED + 1)
    bad = 0
    for _ in range(N_DELTA):
        E = diffpoly(rng, order=3, degree=3, lo=-3, hi=3)
        bad += not variational_derivative(total_derivative(E)).is_zero()
    assert _record(1, "delta(Dz E) = 0", bad == 0, f"{N_DELTA} samples, {bad} nonzero")


def test_02_euler_lagrange_identity():
    rng = rng_from(DEFAULT_SEED + 2)
    bad, empty = 0, 0
    for k in range(N_EL):
        D = diffpoly(rng, order=2, degree=3, x_free=False) if k % 2 else variational_equation(rng)[1]
        rep = euler_lagrange_identity_check(D, LOOP_WINDOW)
        bad += not rep.passed
        empty += not rep.checked
    ok = bad == 0 and empty == 0
    assert _record(2, "Euler-Lagrange coefficient identity on [-3, 12]", ok,
                   f"{N_EL} equations, {bad} failed, {empty} with no checked index")


def test_03_helmholtz_iff_closed():
    battery = _battery()
    kinds = {k: sum(1 for kk, _ in battery if kk == k) for k, _ in battery}
    disagree = []
    for kind, D in battery:
        assert D.order() <= 3
        if helmholtz_check(D).passed != symplectic_closedness_check(D, LOOP_WINDOW).passed:
            disagree.append(str(D))
    ok = not disagree and len(battery) >= 30 and all(v >= 10 for v in kinds.values())
    assert _record(3, "Helmholtz <=> symplectic closedness", ok,
                   f"{len(battery)} equations {kinds}, {len(disagree)} disagreements")


def test_04_vainberg_tonti():
    checked, bad = 0, 0
    for _, D in _battery():
        if not helmholtz_check(D).passed:
            continue
        checked += 1
        res = vainberg_tonti(D)
        bad += not (res.verified and variational_derivative(res.lagrangian) == D)
    assert _record(4, "Vainberg-Tonti Lagrangian reproduces D", bad == 0 and checked > 0,
                   f"{checked} variational equations, {bad} failures")


def test_05_adjointness():
    rng = rng_from(DEFAULT_SEED + 5)
    bad = 0
    for _ in range(N_ADJOINT):
        L, M = linop(rng, 4, -3, 3), linop(rng, 4, -3, 3)
        f, g = laurent_poly(rng, -5, 5, 4), laurent_poly(rng, -5, 5, 4)
        Ls = adjoint(L)
        bad += residue_pairing(apply(L, f), g) != residue_pairing(f, apply(Ls, g))
        bad += adjoint(Ls) != L
        bad += adjoint(L @ M) != adjoint(M) @ Ls
    assert _record(5, "residue adjointness, involution, anti-homomorphism", bad == 0,
                   f"{N_ADJOINT} triples, {bad} failures")


def test_06_b_equals_a_prime():
    rng = rng_from(DEFAULT_SEED + 6)
    choices = [parse_series("1 + z^3")] + [laurent_poly(rng, 0, 4, 3) for _ in range(2)]
    z = parse_series("z")
    bad = 0
    for a in choices:
        c = laurent_poly(rng, -2, 2, 2)
        bad += not is_self_adjoint(LinOp([c, ddz(a), a]))
        bad += is_self_adjoint(LinOp([c, ddz(a) + z, a]))
    assert _record(6, "a d^2 + b d + c self-adjoint iff b = a'", bad == 0,
                   f"{len(choices)} choices of a")


def test_07_skew_adjoint_case():
    L = LinOp([parse_series("z"), parse_series("z^2")])
    D = L.to_diffpoly()
    skew = adjoint(L) == -L
    helm = helmholtz_check(D).passed
    closed = symplectic_closedness_check(D, LOOP_WINDOW).passed
    ok = skew and not helm and not closed
    assert _record(7, "z^2 d + z is skew; Helmholtz and closedness fail", ok,
                   f"skew={skew}, helmholtz={helm}, closed={closed}")


def test_08_clairaut_tangent():
    D = parse_poly("y - (z*y' + y'^2)")
    seen = {}
    for t in range(-2, 3):
        gamma = LaurentSeries({1: t, 0: t * t})
        dims = tangent_cohomology_dims(linearize_at(D, gamma), DISC, TANGENT_M)
        seen[t] = (dims.h0, dims.h1, dims.stabilized)
    # F'(t) = 2t vanishes only at t = 0
    ok = all(s for _, _, s in seen.values())
    ok &= seen[0][:2] == (1, 1) and seen[1][:2] == (1, 0) and seen[-2][:2] == (1, 0)
    ok &= all((h1 != 0) == (t == 0) for t, (_, h1, _) in seen.items())
    assert _record(8, "Clairaut cokernel jumps exactly at F'(t) = 0", ok,
                   ", ".join(f"t={t}:{h0},{h1}" for t, (h0, h1, _) in seen.items()))


def test_09_square_root_jump():
    D = parse_poly("y'^2 - 4*y")
    seen = {}
    for lam in (0, 1, -1, 2):
        gamma = LaurentSeries({2: 1, 1: 2 * lam, 0: lam * lam})
        dims = tangent_cohomology_dims(linearize_at(D, gamma), DISC, TANGENT_M)
        seen[lam] = (dims.h0, dims.h1, dims.stabilized)
    ok = seen[0] == (1, 1, True) and all(seen[lam] == (1, 0, True) for lam in (1, -1, 2))
    assert _record(9, "(y')^2 = 4y jumps at lambda = 0", ok,
                   ", ".join(f"l={k}:{a},{b}" for k, (a, b, _) in seen.items()))


def test_10_quadratic_action():
    rng = rng_from(DEFAULT_SEED + 10)
    bad = 0
    for _ in range(20):
        L = self_adjoint_linop(rng)
        bad += variational_derivative(quadratic_action(L)) != L.to_diffpoly()
    skew = LinOp([0, 1])
    differs = variational_derivative(quadratic_action(skew)) != skew.to_diffpoly()
    assert _record(10, "critical locus of the quadratic action", bad == 0 and differs,
                   f"20 self-adjoint operators, {bad} failures; non-self-adjoint differs={differs}")


def test_11_linear_bridge():
    rng = rng_from(DEFAULT_SEED + 11)
    bad, sa = 0, 0
    for k in range(N_LINEAR):
        D = linear_equation(rng, 3, self_adjoint=bool(k % 2))
        L = LinOp.from_diffpoly(D)
        sa += is_self_adjoint(L)
        bad += helmholtz_check(D).passed != is_self_adjoint(L)
    assert _record(11, "linear Helmholtz <=> self-adjoint", bad == 0 and 0 < sa < N_LINEAR,
                   f"{N_LINEAR} equations ({sa} self-adjoint), {bad} mismatches")


def test_12_order2_integrand():
    rng = rng_from(DEFAULT_SEED + 12)
    bad, pairs, eqs = 0, 0, 0
    while eqs < N_ORDER2:
        D = diffpoly(rng, order=2, degree=3, x_free=False)
        if D.order() != 2:
            continue
        eqs += 1
        for i in range(-2, 3):
            for j in range(i + 1, 3):
                exp = expand_on_loops(order2_integrand(D, i, j), LOOP_WINDOW)
                if not (exp.x_free or exp.window.in_exact(-1)):
                    continue
                pairs += 1
                bad += exp.coeff(-1) != cross_integrability(D, i, j, LOOP_WINDOW)
    assert _record(12, "order-2 integrand matches cross-integrability", bad == 0 and pairs > 0,
                   f"{eqs} equations, {pairs} pairs, {bad} mismatches")


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
