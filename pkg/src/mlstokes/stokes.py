"""The exponentially small part of E_a(-x) beyond optimal truncation.

The remainder R_M is a sum of an erfc-smoothed exponential, which switches
the pole contribution on and off across the Stokes line, and an
inverse-power series in X whose coefficients B_{2k} come from expanding the
saddle-point integrand f(u) about u = 0 and removing its pole at u0 = i c.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .algebraic import TruncationData, optimal_truncation
from .errors import DomainError, PoleTooCloseToSaddle, ValidityWarning
from .near_one import available_orders, b_tables_near_one
from .precision import (
    PiMultiple,
    PrecisionContext,
    TruncatedSeries,
    angle,
    as_fraction,
    series_arith,
    series_exp,
    series_log,
    series_revert,
    series_scale,
    series_shift_down,
    series_add_constant,
    series_pow,
    to_real,
)
from .specfun import erfc_complex

DEFAULT_KMAX = 6
THETA_PI = PiMultiple(1)


# ---------------------------------------------------------------------------
# Geometry of pole and saddle


@dataclass(frozen=True)
class StokesGeometry:
    theta: object
    a: Fraction
    omega: object
    t0: object
    c: object
    u0: object
    phase: object = field(repr=False, compare=False, default=None)


def _omega(theta, a: Fraction, ctx: PrecisionContext):
    if isinstance(theta, PiMultiple):
        # Exact zero on the Stokes line theta = pi a.
        return ctx.mp.pi * to_real((theta.coef - a) / a, ctx)
    return (angle(theta, ctx) - ctx.mp.pi * to_real(a, ctx)) / to_real(a, ctx)


def _g_float(w: float) -> complex:
    """2 (1 + i w - e^{i w}) / w**2 in double precision."""
    if abs(w) < 0.1:
        acc, term = 0j, 1.0 + 0j
        for n in range(2, 20):
            term = (1j) ** n * w ** (n - 2) / math.factorial(n)
            acc -= 2 * term
        return acc
    return 2 * (1 + 1j * w - cmath.exp(1j * w)) / (w * w)


def branch_reference(omega: float) -> complex:
    """c(omega) in double precision, by continuation from omega = 0.

    Walks omega outward from zero, taking at each step the square root of
    2 (1 + i w - e^{i w}) nearest the previous value.
    """
    if omega == 0:
        return 0j
    steps = max(16, math.ceil(abs(omega) / 0.02))
    prev = None
    for j in range(1, steps + 1):
        w = omega * j / steps
        root = w * cmath.sqrt(_g_float(w)) if prev is None else cmath.sqrt(w * w * _g_float(w))
        if prev is not None and abs(root - prev) > abs(root + prev):
            root = -root
        prev = root
    return prev


def _c_value(omega, ctx: PrecisionContext):
    mp = ctx.mp
    if omega == 0:
        return mp.mpc(0)
    if abs(omega) < 0.5:
        # sum_{n>=2} -(i w)^n / n!, free of the cancellation in 1 + i w - e^{i w}
        half_sq = mp.mpc(0)
        term = mp.mpc(1)
        n = 0
        tol = mp.mpf(10) ** (-ctx.dps)
        while True:
            n += 1
            term = term * mp.mpc(0, omega) / n
            if n >= 2:
                half_sq -= term
                if abs(term) < tol * abs(half_sq):
                    break
        ratio = 2 * half_sq / (omega * omega)
        return omega * mp.sqrt(ratio)
    root = mp.sqrt(2 * (1 + mp.mpc(0, omega) - mp.expj(omega)))
    ref = branch_reference(float(omega))
    if abs(complex(root) - ref) > abs(complex(root) + ref):
        root = -root
    return root


def make_geometry(theta, a, ctx: PrecisionContext) -> StokesGeometry:
    """omega, t0, c and u0 for the phase ``theta`` of z.

    ``theta`` is in radians, or a :class:`PiMultiple` for exact multiples
    of pi.  The square-root branch of c follows c ~ omega near the Stokes
    line theta = pi a and is continued from there.
    """
    a = as_fraction(a)
    if not 0 < a <= 1:
        raise DomainError(f"need 0 < a <= 1, got a = {a}")
    mp = ctx.mp
    omega = _omega(theta, a, ctx)
    c = _c_value(omega, ctx)
    return StokesGeometry(
        theta=angle(theta, ctx),
        a=a,
        omega=omega,
        t0=mp.expj(omega),
        c=c,
        u0=mp.mpc(0, 1) * c,
        phase=theta,
    )


# ---------------------------------------------------------------------------
# Coefficients of the integrand


@dataclass(frozen=True)
class CoefficientSet:
    alpha: list
    B: list
    A: object
    nu: object
    kmax: int
    path: str = "engine"


def extraction_digits(c_abs: float, kmax: int) -> int:
    """Extra digits lost cancelling a e^{-i nu w} alpha_{2k} against (i c)^{-2k-1}."""
    if c_abs == 0 or c_abs >= 1:
        return 0
    return math.ceil((2 * kmax + 2) * math.log10(1 / c_abs)) + 5


def _t_of_u(order: int, ctx: PrecisionContext) -> TruncatedSeries:
    """s(u) = t(u) - 1 on the branch u ~ t - 1 of u**2 / 2 = t - log t - 1."""
    mp = ctx.mp
    # u(s) = s sqrt(h(s)),  h(s) = 2 (s - log(1 + s)) / s**2 = sum 2 (-s)^n / (n + 2)
    h = TruncatedSeries.from_values(
        [2 * mp.mpf(-1) ** n / (n + 2) for n in range(order)], ctx)
    root = series_pow(h, mp.mpf(1) / 2, ctx)
    u_of_s = TruncatedSeries((mp.mpc(0),) + root.coeffs[: order - 1])
    return series_revert(u_of_s, ctx)


def _f_series(a: Fraction, nu, t_pole_a, order: int, ctx: PrecisionContext,
              laurent: bool = False) -> TruncatedSeries:
    """Maclaurin series of f(u) = u t^{a+nu} / ((t - 1)(t^a - t0^a)).

    With ``laurent`` (pole at the saddle, t0^a = 1) returns u f(u) instead,
    which is analytic there.
    """
    mp = ctx.mp
    s = _t_of_u(order + 2, ctx)
    log_t = series_log(series_add_constant(s, 1, ctx), ctx)
    t_a = series_exp(series_scale(log_t, to_real(a, ctx), ctx), ctx)
    t_a_nu = series_exp(series_scale(log_t, to_real(a, ctx) + mp.mpf(nu), ctx), ctx)
    q = series_shift_down(s)  # (t - 1) / u
    if laurent:
        m = series_shift_down(series_add_constant(t_a, -1, ctx))
        den = series_arith(q.truncate(order), m.truncate(order), "mul", ctx)
    else:
        diff = series_add_constant(t_a, -t_pole_a, ctx)
        den = series_arith(q.truncate(order), diff.truncate(order), "mul", ctx)
    return series_arith(t_a_nu.truncate(order), den, "div", ctx)


def f_coefficients(a, nu, geom: StokesGeometry, kmax: int,
                   ctx: PrecisionContext) -> CoefficientSet:
    """alpha_{2k} and B_{2k} for k = 0..kmax.

    Works at raised precision so that the cancellation between the two
    parts of B_{2k} does not eat the promised digits.  On the Stokes line
    (c exactly 0) the pole sits on the saddle and B comes from the Laurent
    form; alpha is then undefined and returned empty.
    """
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    a = as_fraction(a)
    c_abs = abs(complex(geom.c))
    if geom.c != 0 and c_abs < 10 ** (-ctx.digits / 4):
        raise PoleTooCloseToSaddle(f"|u0| = {c_abs:.3g} is too small at {ctx.digits} digits")
    work = ctx.raised(extraction_digits(c_abs, kmax))
    mp = work.mp
    g = make_geometry(geom.phase if geom.phase is not None else geom.theta, a, work)
    nuv = mp.mpf(nu)
    av = to_real(a, work)
    order = 2 * kmax + 6
    out = ctx.mp
    if g.c == 0:
        uf = _f_series(a, nuv, None, order + 1, work, laurent=True)
        # f / A = 1/u + g(u) with A = 1/a
        B = [out.mpc(av * uf[2 * k + 1]) for k in range(kmax + 1)]
        return CoefficientSet(alpha=[], B=B, A=out.mpc(1 / av), nu=out.mpf(nuv),
                              kmax=kmax, path="stokes-line")
    t_pole_a = mp.expj(av * g.omega)
    f = _f_series(a, nuv, t_pole_a, order, work)
    inv_A = av * mp.expj(-nuv * g.omega)
    alpha = [f[2 * k] for k in range(kmax + 1)]
    B = [inv_A * alpha[k] + 1 / g.u0 ** (2 * k + 1) for k in range(kmax + 1)]
    return CoefficientSet(
        alpha=[out.mpc(v) for v in alpha],
        B=[out.mpc(v) for v in B],
        A=out.mpc(1 / inv_A),
        nu=out.mpf(nuv),
        kmax=kmax,
    )


def alpha_closed_forms(a, nu, ctx: PrecisionContext, corrected: bool = False) -> list:
    """Closed forms of alpha_0, alpha_2, alpha_4 at theta = pi, as usually quoted.

    The quoted alpha_2 carries the wrong overall sign; ``corrected=True``
    flips it, which then agrees with the series engine and with a contour
    integral of f(u).
    """
    mp = ctx.mp
    a = to_real(a, ctx)
    nu = mp.mpf(nu)
    T = mp.expj(mp.pi * (1 - a))  # e^{i a omega(pi)}
    d = 1 - T
    alpha0 = 1 / d
    sign = 1 if corrected else -1
    alpha2 = sign * (1 + 6 * nu**2 * d**2 + (6 * a**2 + 6 * a - 2) * T
                     + (6 * a**2 - 6 * a + 1) * T**2
                     - 6 * nu * d * (1 + (2 * a - 1) * T)) / (12 * d**3)
    alpha4 = (
        1 + 36 * nu**4 * d**4
        + 4 * (-1 + 9 * a + 30 * a**2 + 30 * a**3 + 9 * a**4) * T
        + 6 * (1 - 18 * a - 20 * a**2 + 60 * a**3 + 66 * a**4) * T**2
        + 4 * (-1 + 27 * a - 30 * a**2 - 90 * a**3 + 99 * a**4) * T**3
        + (1 - 36 * a + 120 * a**2 - 120 * a**3 + 36 * a**4) * T**4
        - 24 * nu**3 * d**3 * (5 + (-5 + 6 * a) * T)
        + 24 * nu**2 * d**2 * (5 + (-10 + 15 * a + 9 * a**2) * T + (5 - 15 * a + 9 * a**2) * T**2)
        - 12 * nu * d * (3 + (-9 + 20 * a + 30 * a**2 + 12 * a**3) * T
                         + (9 - 40 * a + 48 * a**3) * T**2
                         + (-3 + 20 * a - 30 * a**2 + 12 * a**3) * T**3)
    ) / (864 * d**5)
    return [alpha0, alpha2, alpha4]


def leading_B0(a, nu, ctx: PrecisionContext):
    """B_0(pi) = a e^{-i nu omega} / (1 - e^{i a omega}) + 1 / (i c)."""
    a = as_fraction(a)
    geom = make_geometry(THETA_PI, a, ctx)
    mp = ctx.mp
    av = to_real(a, ctx)
    nu = mp.mpf(nu)
    return av * mp.expj(-nu * geom.omega) / (1 - mp.expj(av * geom.omega)) + 1 / geom.u0


# ---------------------------------------------------------------------------
# Assembled expansions


@dataclass(frozen=True)
class ExpansionReport:
    value: object
    erfc_term: object
    series_terms: list
    kmax_used: int
    trunc: TruncationData
    est_error: object
    omitted_term: object = None
    coefficients: CoefficientSet | None = None
    validity_warning: bool = False
    theta: object = None


def _coefficients_with_fallback(a: Fraction, nu, geom, kmax: int, ctx: PrecisionContext):
    """Engine coefficients to kmax + 1, or the near-one tables if the pole is too close."""
    try:
        return f_coefficients(a, nu, geom, kmax + 1, ctx)
    except PoleTooCloseToSaddle:
        kt = min(kmax + 1, 2)
        B = b_tables_near_one(a, nu, kt, available_orders(0) - 1, ctx, omega=geom.omega)
        return CoefficientSet(alpha=[], B=B, A=None, nu=nu, kmax=kt, path="near-one-table")


def _single_side(a: Fraction, x: Fraction, theta, kmax: int, ctx: PrecisionContext):
    """The upper-cut contribution J at phase theta, as an unscaled report."""
    c_estimate = abs(branch_reference(float((float(angle(theta, PrecisionContext(20)))
                                             - math.pi * float(a)) / float(a))))
    hi = ctx.raised(extraction_digits(c_estimate, kmax + 1) + 10)
    trunc = optimal_truncation(a, x, hi)
    work = ctx.raised(10)
    mp = work.mp
    geom = make_geometry(theta, a, work)
    coeffs = _coefficients_with_fallback(a, trunc.nu, geom, kmax, ctx)
    kmax_used = min(kmax, len(coeffs.B) - 1)
    X = mp.mpf(trunc.X)
    av = to_real(a, work)
    phase = geom.theta
    z_root = X * mp.expj(phase / av)  # z^{1/a}
    erfc_term = mp.exp(z_root) * erfc_complex(geom.c * mp.sqrt(X / 2), work) / 2
    prefactor = -mp.mpc(0, 1) * mp.exp(-X - mp.mpc(0, 1) * geom.omega * X) / mp.sqrt(2 * mp.pi * X)
    terms = []
    poch = mp.mpf(1)
    for k in range(len(coeffs.B)):
        terms.append(prefactor * mp.mpc(coeffs.B[k]) * poch * (X / 2) ** (-k))
        poch *= mp.mpf(1) / 2 + k
    included = terms[: kmax_used + 1]
    omitted = terms[kmax_used + 1] if len(terms) > kmax_used + 1 else None
    return trunc, geom, coeffs, erfc_term, included, omitted, kmax_used


def _in_validity_range(a: Fraction) -> bool:
    return Fraction(1, 3) < a < 1


def exp_small_remainder(a, x, kmax: int = DEFAULT_KMAX,
                        ctx: PrecisionContext | None = None) -> ExpansionReport:
    """R_M(a; -x) from the erfc term plus sum_{k<=kmax} B_{2k}(1/2)_k (X/2)^-k.

    Outside 1/3 < a < 1 a :class:`ValidityWarning` is issued and the report
    is flagged, but the value is still computed.
    """
    ctx = ctx or PrecisionContext()
    a = as_fraction(a)
    x = as_fraction(x)
    if not 0 < a <= 1:
        raise DomainError(f"need 0 < a <= 1, got a = {a}")
    if x <= 0:
        raise DomainError("x must be positive")
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    flagged = not _in_validity_range(a)
    if flagged:
        warnings.warn(f"a = {a} is outside (1/3, 1); expansion not proven valid",
                      ValidityWarning, stacklevel=2)
    trunc, geom, coeffs, erfc_term, terms, omitted, kmax_used = _single_side(
        a, x, THETA_PI, kmax, ctx)
    mp = ctx.mp
    scale = 2 / to_real(a, ctx.raised(10))
    total = erfc_term + sum(terms)
    value = scale * total.real
    est = scale * abs(omitted) if omitted is not None else scale * abs(terms[-1])
    return ExpansionReport(
        value=mp.mpf(value),
        erfc_term=mp.mpc(erfc_term),
        series_terms=[mp.mpc(t) for t in terms],
        kmax_used=kmax_used,
        trunc=TruncationData(trunc.M, mp.mpf(trunc.nu), mp.mpf(trunc.X)),
        est_error=mp.mpf(est),
        omitted_term=None if omitted is None else mp.mpc(omitted),
        coefficients=coeffs,
        validity_warning=flagged,
        theta=mp.pi,
    )


def exp_small_general_theta(a, x, theta, kmax: int = DEFAULT_KMAX,
                            ctx: PrecisionContext | None = None) -> ExpansionReport:
    """The upper-cut contribution J at z = x e^{i theta}, 0 < theta < 3 pi a.

    ``value`` is complex and equals (1/a) times the bracket of the expansion;
    on theta = pi, 2 Re(value) is the full remainder.
    """
    ctx = ctx or PrecisionContext()
    a = as_fraction(a)
    x = as_fraction(x)
    if not 0 < a < 1:
        raise DomainError(f"need 0 < a < 1, got a = {a}")
    th = float(theta)
    if not 0 < th < 3 * math.pi * float(a):
        raise DomainError(f"theta = {th} is outside (0, 3 pi a)")
    trunc, geom, coeffs, erfc_term, terms, omitted, kmax_used = _single_side(
        a, x, theta, kmax, ctx)
    mp = ctx.mp
    inv_a = 1 / to_real(a, ctx.raised(10))
    value = inv_a * (erfc_term + sum(terms))
    est = inv_a * abs(omitted) if omitted is not None else inv_a * abs(terms[-1])
    return ExpansionReport(
        value=mp.mpc(value),
        erfc_term=mp.mpc(erfc_term),
        series_terms=[mp.mpc(t) for t in terms],
        kmax_used=kmax_used,
        trunc=TruncationData(trunc.M, mp.mpf(trunc.nu), mp.mpf(trunc.X)),
        est_error=mp.mpf(est),
        omitted_term=None if omitted is None else mp.mpc(omitted),
        coefficients=coeffs,
        theta=mp.mpf(geom.theta),
    )


def exp_small_two_sided(a, x, theta, kmax: int = DEFAULT_KMAX,
                        ctx: PrecisionContext | None = None):
    """R_M(a; x e^{i theta}) ~ J(theta) + conj J(2 pi - theta).

    The lower-cut integral at theta is the conjugate of the upper-cut one
    at 2 pi - theta because M is an integer.  Both phases must lie in
    (0, 3 pi a).
    """
    ctx = ctx or PrecisionContext()
    if isinstance(theta, PiMultiple):
        mirror = PiMultiple(2 - theta.coef)
    else:
        mirror = 2 * PrecisionContext(ctx.digits + 20).mp.pi - to_real(theta, ctx.raised(20))
    upper = exp_small_general_theta(a, x, theta, kmax, ctx)
    lower = exp_small_general_theta(a, x, mirror, kmax, ctx)
    return ctx.mp.mpc(upper.value + lower.value.conjugate()), upper, lower


def leading_order_estimate(a, x, ctx: PrecisionContext | None = None):
    """Leading behaviour of R_M(a; -x) as a -> 1 with omega X small.

    Issues a :class:`ValidityWarning` when omega X >= 1.
    """
    ctx = ctx or PrecisionContext()
    a = as_fraction(a)
    if not 0 < a <= 1:
        raise DomainError(f"need 0 < a <= 1, got a = {a}")
    mp = ctx.mp
    trunc = optimal_truncation(a, x, ctx)
    X, nu = trunc.X, trunc.nu
    av = to_real(a, ctx)
    w = mp.pi * to_real(1 - a, ctx) / av
    if w * X >= 1:
        warnings.warn(f"omega X = {float(w * X):.3g} is not small", ValidityWarning, stacklevel=2)
    root = mp.sqrt(2 * mp.pi * X)
    first = mp.exp(X * mp.cospi(to_real(1 / a, ctx))) / av * (1 - 2 * w * X / root)
    second = w * mp.exp(-X) / (av * root) * ((av / 2 + nu - mp.mpf(1) / 6) * X
                                              + av**2 / 12 + nu * (av + nu) / 2)
    return first - second
