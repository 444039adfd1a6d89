"""Gamma of a real argument and erfc of a complex argument.

Both are evaluated from scratch at the context precision so that the
oracle and the asymptotic side share no hidden library tables; mpmath is
used only as the big-float carrier.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import GammaPole, PrecisionBudgetExceeded
from .precision import PrecisionContext, as_fraction, to_complex, to_real

_EXACT_FACTORIAL_LIMIT = 2000
_LOG10_E = math.log10(math.e)
MAX_ERFC_DIGITS = 10000


@lru_cache(maxsize=None)
def _bernoulli_even(count: int) -> tuple:
    """B_0, B_2, ..., B_{2(count-1)} as exact fractions."""
    b = [Fraction(1)]
    for m in range(1, 2 * count - 1):
        acc = sum(math.comb(m + 1, k) * b[k] for k in range(m))
        b.append(-acc / (m + 1))
    return tuple(b[0::2])


@lru_cache(maxsize=None)
def _stirling_coefficients(count: int) -> tuple:
    """B_{2k} / (2k (2k-1)) for k = 1..count."""
    bern = _bernoulli_even(count + 1)
    return tuple(bern[k] / (2 * k * (2 * k - 1)) for k in range(1, count + 1))


@lru_cache(maxsize=256)
def _stirling_mpf(dps: int, count: int) -> tuple:
    # Keyed on dps: the values belong to the shared context of that precision.
    mp = PrecisionContext(dps - 5, 5).mp
    return tuple(mp.mpf(c.numerator) / c.denominator for c in _stirling_coefficients(count))


def _log_gamma_stirling(y, ctx: PrecisionContext):
    """log Gamma(y) for y large enough that the Stirling tail is negligible."""
    mp = ctx.mp
    tol = mp.mpf(10) ** (-(ctx.dps + 2))
    acc = (y - 0.5) * mp.log(y) - y + mp.log(2 * mp.pi) / 2
    y2 = y * y
    power = y
    count = 16
    coeffs = _stirling_mpf(ctx.dps, count)
    for k in range(4 * ctx.dps + 50):
        if k >= count:
            count *= 2
            coeffs = _stirling_mpf(ctx.dps, count)
        term = coeffs[k] / power
        acc += term
        if abs(term) < tol * max(1, abs(acc)):
            return acc
        power *= y2
    raise ArithmeticError("Stirling series failed to converge")


def _promotion_target(ctx: PrecisionContext) -> int:
    return int(0.4 * ctx.dps) + 10


def gamma_hp(y, ctx: PrecisionContext):
    """Gamma(y) for real ``y`` to relative accuracy 10**-ctx.digits.

    Raises :class:`GammaPole` at nonpositive integers.
    """
    mp = ctx.mp
    exact = None
    if not hasattr(y, "_mpf_"):
        exact = as_fraction(y)
    yv = to_real(y, ctx)
    if exact is None:
        exact = as_fraction(yv)
    if exact.denominator == 1:
        n = exact.numerator
        if n <= 0:
            raise GammaPole(f"Gamma has a pole at {n}")
        if n <= _EXACT_FACTORIAL_LIMIT:
            return mp.mpf(math.factorial(n - 1))
    if exact < Fraction(1, 2):
        # Reflection; sinpi of the exact reduced argument keeps poles clean.
        frac = exact - 2 * math.floor(exact / 2)
        s = mp.sinpi(to_real(frac, ctx))
        return mp.pi / (s * gamma_hp(1 - exact, ctx))
    target = _promotion_target(ctx)
    shift = max(0, math.ceil(target - exact))
    z = yv + shift
    prod = mp.mpf(1)
    for j in range(shift):
        prod *= yv + j
    return mp.exp(_log_gamma_stirling(z, ctx)) / prod


def rgamma_hp(y, ctx: PrecisionContext):
    """1/Gamma(y), exactly zero at nonpositive integers."""
    q = as_fraction(y)
    if q.denominator == 1 and q.numerator <= 0:
        return ctx.mp.mpf(0)
    return 1 / gamma_hp(q, ctx)


# ---------------------------------------------------------------------------
# erfc


def erfc_switch_radius(ctx: PrecisionContext) -> float:
    return max(4.0, ctx.digits / 4)


def _erfc_maclaurin(w, ctx: PrecisionContext):
    mp0 = ctx.mp
    wf = complex(w)
    w2 = wf * wf
    extra = math.ceil((abs(wf) ** 2 + max(0.0, w2.real)) * _LOG10_E) + 5
    if ctx.dps + extra > MAX_ERFC_DIGITS:
        raise PrecisionBudgetExceeded(ctx.dps + extra, MAX_ERFC_DIGITS)
    work = ctx.raised(extra)
    mp = work.mp
    z = mp.mpc(w)
    z2 = z * z
    tol = mp.mpf(10) ** (-work.dps)
    power = z
    acc = mp.mpc(0)
    n = 0
    nmin = abs(wf) ** 2
    while True:
        term = power / (2 * n + 1)
        acc += term
        if n > nmin and abs(term) < tol:
            break
        n += 1
        power = -power * z2 / n
    erf = 2 * acc / mp.sqrt(mp.pi)
    return mp0.mpc(1 - erf)


def _erfc_continued_fraction(w, ctx: PrecisionContext):
    """Laplace continued fraction, valid for Re w > 0 and large |w|."""
    mp = ctx.mp
    z = mp.mpc(w)
    tiny = mp.mpf(10) ** (-(ctx.dps * 2))
    eps = mp.mpf(10) ** (-(ctx.dps + 2))
    f = z
    c = f
    d = mp.mpc(0)
    n = 1
    while True:
        an = mp.mpf(n) / 2
        d = z + an * d
        if d == 0:
            d = tiny
        d = 1 / d
        c = z + an / c
        if c == 0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1) < eps:
            break
        n += 1
        if n > 200000:
            raise ArithmeticError("erfc continued fraction did not converge")
    return mp.exp(-z * z) / (mp.sqrt(mp.pi) * f)


def erfc_complex(w, ctx: PrecisionContext):
    """erfc(w) for complex ``w``.

    Maclaurin series of erf below the switch radius (or near the imaginary
    axis), the Laplace continued fraction for large |w| in the right half
    plane, and erfc(-w) = 2 - erfc(w) for the left half plane.
    """
    mp = ctx.mp
    z = to_complex(w, ctx)
    if z == 0:
        return mp.mpc(1)
    if z.real < 0:
        return 2 - erfc_complex(-z, ctx)
    wf = complex(z)
    if abs(wf) < erfc_switch_radius(ctx) or abs(math.atan2(wf.imag, wf.real)) > 3 * math.pi / 8:
        return _erfc_maclaurin(z, ctx)
    return _erfc_continued_fraction(z, ctx)
