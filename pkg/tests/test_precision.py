from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlstokes.errors import (
    CompositionRequiresZeroConstantTerm,
    DivisionBySingularSeries,
    NotRevertible,
)
from mlstokes.precision import (
    PiMultiple,
    PrecisionContext,
    TruncatedSeries,
    as_fraction,
    series_arith,
    series_compose,
    series_exp,
    series_log,
    series_pow,
    series_revert,
)
from mlstokes.stokes import _t_of_u


def S(values, ctx):
    return TruncatedSeries.from_values(values, ctx)


def close(lhs, rhs, ctx, scale=1):
    assert lhs.max_abs_deviation(rhs) < ctx.eps * scale


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(10)
    with pytest.raises(ValueError):
        PrecisionContext(30, guard=2)
    assert PrecisionContext(30).raised(7).digits == 37


def test_context_is_private_to_digits():
    before = mpmath.mp.dps
    c = PrecisionContext(50)
    assert c.mp.dps == 60
    assert mpmath.mp.dps == before


@pytest.mark.parametrize("value, expected", [
    (0.99, Fraction(99, 100)),
    ("1/3", Fraction(1, 3)),
    (40, Fraction(40)),
    ("1e-6", Fraction(1, 10**6)),
])
def test_as_fraction(value, expected):
    assert as_fraction(value) == expected


def test_as_fraction_mpf_is_exact():
    x = mpmath.mpf(1) / 3
    q = as_fraction(x)
    assert mpmath.mpf(q.numerator) / q.denominator == x


def test_pi_multiple():
    assert float(PiMultiple(Fraction(1, 2))) == pytest.approx(1.5707963267948966)


def test_difference_of_squares(ctx30):
    got = series_arith(S([1, 1, 0], ctx30), S([1, -1, 0], ctx30), "mul", ctx30)
    close(got, S([1, 0, -1], ctx30), ctx30)


def test_geometric_series(ctx30):
    got = series_arith(S([1, 0, 0, 0], ctx30), S([1, -1, 0, 0], ctx30), "div", ctx30)
    close(got, S([1, 1, 1, 1], ctx30), ctx30)


def test_self_division(ctx30):
    s = S([2, 3, -1, 5, 7], ctx30)
    close(series_arith(s, s, "div", ctx30), TruncatedSeries.constant(1, 5, ctx30), ctx30)


def test_singular_division(ctx30):
    with pytest.raises(DivisionBySingularSeries):
        series_arith(S([1, 1], ctx30), S([0, 1], ctx30), "div", ctx30)


def test_compose_constant_inner(ctx30):
    exp_series = S([1 / mpmath.factorial(n) for n in range(6)], ctx30)
    got = series_compose(exp_series, TruncatedSeries.zeros(6, ctx30), ctx30)
    close(got, TruncatedSeries.constant(1, 6, ctx30), ctx30)


def test_compose_identity_outer(ctx30):
    s = S([0, 2, -1, 0.5, 3], ctx30)
    close(series_compose(TruncatedSeries.identity(5, ctx30), s, ctx30), s, ctx30)


def test_compose_requires_zero_constant(ctx30):
    with pytest.raises(CompositionRequiresZeroConstantTerm):
        series_compose(S([1, 1, 1], ctx30), S([1, 1, 0], ctx30), ctx30)


def test_revert_identity(ctx30):
    ident = TruncatedSeries.identity(6, ctx30)
    close(series_revert(ident, ctx30), ident, ctx30)


def test_not_revertible(ctx30):
    with pytest.raises(NotRevertible):
        series_revert(S([0, 0, 1], ctx30), ctx30)


def test_saddle_map_inversion(ctx60):
    # t(u) = 1 + u + u^2/3 + u^3/36 - u^4/270 + u^5/4320 + ...
    s = _t_of_u(6, ctx60)
    expected = [0, 1, Fraction(1, 3), Fraction(1, 36), Fraction(-1, 270), Fraction(1, 4320)]
    for got, want in zip(s.coeffs, expected):
        assert abs(got - ctx60.mp.mpf(want.numerator) / want.denominator) < ctx60.eps


def test_saddle_map_satisfies_definition(ctx60):
    # u^2 / 2 = t - log t - 1 must hold through the truncation order
    n = 12
    s = _t_of_u(n, ctx60)
    t = S([1] + list(s.coeffs[1:]), ctx60)
    lhs = series_arith(t, series_log(t, ctx60), "sub", ctx60)
    for k in range(n):
        want = mpmath.mpf(1) / 2 if k == 2 else (1 if k == 0 else 0)
        assert abs(lhs[k] - want) < ctx60.eps * 10


def test_exp_log_roundtrip(ctx30):
    s = S([2, 0.5, -0.25, 1, 0.1, 0.3], ctx30)
    close(series_exp(series_log(s, ctx30), ctx30), s, ctx30, scale=10)


def test_pow_half_squares_back(ctx30):
    s = S([4, 1, 2, -1, 0.5], ctx30)
    r = series_pow(s, mpmath.mpf(1) / 2, ctx30)
    close(series_arith(r, r, "mul", ctx30), s, ctx30, scale=10)


coeff = st.fractions(min_value=-3, max_value=3, max_denominator=50)


@settings(max_examples=40, deadline=None)
@given(lead=st.fractions(min_value=Fraction(1, 4), max_value=3, max_denominator=50),
       rest=st.lists(coeff, min_size=4, max_size=8))
def test_revert_roundtrip(lead, rest):
    ctx = PrecisionContext(30)
    vals = [0, lead] + rest
    s = S([mpmath.mpf(v.numerator) / v.denominator for v in vals], ctx)
    inv = series_revert(s, ctx)
    back = series_compose(s, inv, ctx)
    ident = TruncatedSeries.identity(len(vals), ctx)
    scale = max(1, max(abs(c) for c in inv.coeffs)) ** 2
    assert back.max_abs_deviation(ident) < ctx.eps * 1e3 * scale


@settings(max_examples=25, deadline=None)
@given(vals=st.lists(coeff, min_size=3, max_size=8))
def test_mul_commutes(vals):
    ctx = PrecisionContext(20)
    p = S([mpmath.mpf(v.numerator) / v.denominator for v in vals], ctx)
    q = S([mpmath.mpf(v.numerator) / v.denominator for v in reversed(vals)], ctx)
    close(series_arith(p, q, "mul", ctx), series_arith(q, p, "mul", ctx), ctx, scale=100)
