import math
import random
import warnings
from fractions import Fraction

import pytest

from mlstokes.algebraic import script_E_detail
from mlstokes.errors import DomainError, ValidityWarning
from mlstokes.oracle import remainder_direct
from mlstokes.precision import PiMultiple, PrecisionContext
from mlstokes.stokes import (
    THETA_PI,
    alpha_closed_forms,
    exp_small_general_theta,
    exp_small_remainder,
    exp_small_two_sided,
    f_coefficients,
    leading_B0,
    leading_order_estimate,
    make_geometry,
)


def test_stokes_line_geometry(ctx30):
    g = make_geometry(PiMultiple(Fraction(4, 5)), Fraction(4, 5), ctx30)
    assert g.omega == 0
    assert g.c == 0


def test_upper_endpoint(ctx30):
    mp = ctx30.mp
    g = make_geometry(PiMultiple(Fraction(27, 10)), Fraction(9, 10), ctx30)
    want = 2 * mp.sqrt(mp.pi) * mp.expjpi(mp.mpf(1) / 4)
    assert abs(g.c - want) < ctx30.eps * abs(want)


def test_lower_reflection_endpoint(ctx30):
    mp = ctx30.mp
    g = make_geometry(PiMultiple(Fraction(-9, 10)), Fraction(9, 10), ctx30)
    want = 2 * mp.sqrt(mp.pi) * mp.expjpi(mp.mpf(3) / 4)
    assert abs(g.c - want) < ctx30.eps * abs(want)


def test_small_omega_series(ctx60):
    mp = ctx60.mp
    g = make_geometry(THETA_PI, Fraction(99, 100), ctx60)
    w = g.omega
    assert abs(w - mp.pi / 99) < ctx60.eps
    series = w + 1j * w**2 / 6 - w**3 / 36 - 1j * w**4 / 270 + w**5 / 2592
    gap = abs(g.c - series)
    assert gap < 10 * w**6


@pytest.mark.parametrize("a", [Fraction(2, 5), Fraction(3, 4), Fraction(19, 20)])
def test_branch_consistency(a, ctx30):
    mp = ctx30.mp
    for j in range(1, 101):
        g = make_geometry(PiMultiple(3 * a * Fraction(j, 101)), a, ctx30)
        w = g.omega
        assert abs(g.c**2 / 2 - (1 + 1j * w - mp.expj(w))) < ctx30.eps * 10


@pytest.mark.parametrize("a", [Fraction(2, 5), Fraction(3, 4), Fraction(19, 20)])
def test_arg_sector_beyond_stokes_line(a, ctx30):
    # on (pi a, 3 pi a] the argument of c lies in (0, pi/4]
    mp = ctx30.mp
    for j in range(1, 201):
        g = make_geometry(PiMultiple(a + 2 * a * Fraction(j, 201)), a, ctx30)
        assert 0 < mp.arg(g.c) < mp.pi / 4


def test_branch_continuity(ctx30):
    a = Fraction(3, 5)
    prev = None
    for j in range(1, 400):
        c = complex(make_geometry(PiMultiple(3 * a * Fraction(j, 400)), a, ctx30).c)
        if prev is not None:
            assert abs(c - prev) < 0.1
        prev = c


def test_alpha_closed_forms_fixed(ctx30):
    a, nu = Fraction(9, 10), ctx30.mp.mpf("0.3")
    geom = make_geometry(THETA_PI, a, ctx30)
    eng = f_coefficients(a, nu, geom, 2, ctx30).alpha
    for got, want in zip(eng, alpha_closed_forms(a, nu, ctx30, corrected=True)):
        assert abs(got - want) < ctx30.eps * 1e5 * abs(want)


def test_quoted_alpha2_has_flipped_sign(ctx30):
    a, nu = Fraction(9, 10), ctx30.mp.mpf("0.3")
    quoted = alpha_closed_forms(a, nu, ctx30)
    fixed = alpha_closed_forms(a, nu, ctx30, corrected=True)
    assert quoted[0] == fixed[0] and quoted[2] == fixed[2]
    assert quoted[1] == -fixed[1]


@pytest.mark.parametrize("a, nu", [("0.5", "0"), ("0.9", "0.3"), ("0.65", "-0.4")])
def test_alpha_against_contour_integral(a, nu):
    # Maclaurin coefficients of f(u) by the trapezoidal rule on |u| = 0.15,
    # with t(u) found pointwise from u^2/2 = t - log t - 1
    ctx = PrecisionContext(25)
    mp = ctx.mp
    av, nuv = mp.mpf(a), mp.mpf(nu)
    T = mp.expj(mp.pi * (1 - av))

    def f(u):
        t = mp.findroot(lambda t: t - mp.log(t) - 1 - u * u / 2, 1 + u + u**2 / 3 + u**3 / 36)
        return u * t ** (av + nuv) / ((t - 1) * (t**av - T))

    n, r = 64, mp.mpf("0.15")
    nodes = [r * mp.expj(2 * mp.pi * (j + mp.mpf(1) / 2) / n) for j in range(n)]
    values = [f(z) for z in nodes]
    eng = f_coefficients(Fraction(a), nuv, make_geometry(THETA_PI, Fraction(a), ctx), 2, ctx).alpha
    for k in range(3):
        contour = sum(v / z ** (2 * k) for v, z in zip(values, nodes)) / n
        assert abs(contour - eng[k]) < 1e-15 * max(1, abs(eng[k]))


def test_alpha_closed_forms_random(ctx30):
    rng = random.Random(20240611)
    for _ in range(20):
        a = Fraction(rng.randint(401, 999), 1000)
        nu = ctx30.mp.mpf(rng.uniform(-0.5, 0.5))
        geom = make_geometry(THETA_PI, a, ctx30)
        eng = f_coefficients(a, nu, geom, 2, ctx30).alpha
        for got, want in zip(eng, alpha_closed_forms(a, nu, ctx30, corrected=True)):
            assert abs(got - want) < ctx30.mp.mpf(10) ** (-30 + 5) * abs(want)


def test_B_relation_and_leading(ctx30):
    a = Fraction(9, 10)
    nu = ctx30.mp.mpf("0.3")
    geom = make_geometry(THETA_PI, a, ctx30)
    cs = f_coefficients(a, nu, geom, 3, ctx30)
    mp = ctx30.mp
    for k in range(4):
        want = mp.mpf("0.9") * mp.expj(-nu * geom.omega) * cs.alpha[k] + 1 / geom.u0 ** (2 * k + 1)
        assert abs(cs.B[k] - want) < ctx30.eps * 100
    assert abs(cs.B[0] - leading_B0(a, nu, ctx30)) < ctx30.eps * 100


def test_pole_on_saddle_path(ctx30):
    a = Fraction(4, 5)
    nu = ctx30.mp.mpf("0.1")
    cs = f_coefficients(a, nu, make_geometry(PiMultiple(a), a, ctx30), 2, ctx30)
    assert cs.path == "stokes-line"
    near = f_coefficients(a, nu, make_geometry(PiMultiple(a + Fraction(1, 10**6)), a, ctx30), 2, ctx30)
    for k in range(3):
        assert abs(cs.B[k] - near.B[k]) < 1e-4


def test_truncation_error_bounded_by_estimate(ctx30):
    E = script_E_detail("0.99", 40, ctx30).value
    for k in range(6):
        rep = exp_small_remainder("0.99", 40, k, ctx30)
        assert abs(rep.value - E) < rep.est_error


def test_real_assembly(ctx30):
    rep = exp_small_remainder("0.9", 20, 4, ctx30)
    j = exp_small_general_theta("0.9", 20, THETA_PI, 4, ctx30)
    pair = j.value + j.value.conjugate()
    assert abs(pair.imag) < ctx30.eps * abs(pair)
    assert abs(pair.real - rep.value) < ctx30.eps * 10 * abs(rep.value)


def test_stokes_line_half_switch(ctx30):
    a = Fraction(9, 10)
    rep = exp_small_general_theta(a, 20, PiMultiple(a), 3, ctx30)
    mp = ctx30.mp
    X = rep.trunc.X
    assert abs(rep.erfc_term - mp.exp(X * mp.expjpi(1)) / 2) < ctx30.eps * abs(rep.erfc_term)


@pytest.mark.parametrize("coef", [Fraction(19, 20), Fraction(4, 5)])
def test_two_sided_against_direct(coef, ctx30):
    a, x = Fraction(9, 10), 20
    value, upper, _ = exp_small_two_sided(a, x, PiMultiple(coef), 6, ctx30)
    mp = ctx30.mp
    z = x * mp.expjpi(mp.mpf(coef.numerator) / coef.denominator)
    direct = remainder_direct(a, z, upper.trunc.M, ctx30)
    assert abs(value - direct) < 1e-9 * abs(direct)


def test_general_theta_domain(ctx30):
    with pytest.raises(DomainError):
        exp_small_general_theta("0.5", 5, 2 * math.pi, 2, ctx30)


def test_validity_warning(ctx30):
    with pytest.warns(ValidityWarning):
        rep = exp_small_remainder("0.25", 3, 2, ctx30)
    assert rep.validity_warning
    with warnings.catch_warnings():
        warnings.simplefilter("error", ValidityWarning)
        assert not exp_small_remainder("0.8", 20, 2, ctx30).validity_warning


def test_a_one(ctx30):
    with pytest.warns(ValidityWarning):
        rep = exp_small_remainder(1, 5, 6, ctx30)
    assert abs(rep.value - ctx30.mp.exp(-5)) < ctx30.eps


def test_table_fallback_near_one(ctx30):
    rep = exp_small_remainder("0.999999999", 5, 6, ctx30)
    assert rep.coefficients.path == "near-one-table"
    assert abs(rep.value / ctx30.mp.exp(-5) - 1) < 1e-6


def test_near_limit(ctx30):
    rep = exp_small_remainder(1 - Fraction(1, 10**8), 5, 6, ctx30)
    assert abs(rep.value / ctx30.mp.exp(-5) - 1) < 1e-6


def test_leading_order_values():
    ctx = PrecisionContext(20)
    assert leading_order_estimate(1, 5, ctx) == ctx.mp.exp(-5)
    R = exp_small_remainder("0.995", 20, 6, ctx).value
    assert abs(leading_order_estimate("0.995", 20, ctx) / R - 1) < 0.1


def test_leading_order_improves_toward_one():
    ctx = PrecisionContext(20)
    errs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        for a in ("0.98", "0.99", "0.995", "0.999"):
            R = exp_small_remainder(a, 20, 6, ctx).value
            errs.append(abs(leading_order_estimate(a, 20, ctx) / R - 1))
    assert errs == sorted(errs, reverse=True)
