"""Direct power-series evaluation of the Mittag-Leffler function.

This is the ground truth everything asymptotic is compared against.  The
sum ``sum z**n / Gamma(a n + b)`` is accumulated at a working precision
that covers the cancellation between terms; the precision is raised and the
sum redone whenever the observed cancellation exceeds the estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PrecisionBudgetExceeded
from .precision import PrecisionContext, as_fraction, to_complex
from .specfun import rgamma_hp

DEFAULT_DIGIT_CAP = 10000
_LOG10_E = math.log10(math.e)


@dataclass(frozen=True)
class MLParams:
    """Arguments of E_{a,b}(z).  ``a`` and ``b`` are kept as exact rationals."""

    a: Fraction
    z: object
    b: Fraction = Fraction(1)

    def __post_init__(self):
        a = as_fraction(self.a)
        if not 0 < a <= 1:
            raise DomainError(f"need 0 < a <= 1, got a = {a}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", as_fraction(self.b))


def cancellation_digits(a, x) -> int:
    """Decimal digits lost when summing E_a(-x) directly: ceil(X log10 e) + 10."""
    a = as_fraction(a)
    if not 0 < a <= 1:
        raise DomainError(f"need 0 < a <= 1, got a = {a}")
    x = float(as_fraction(x))
    if x <= 0:
        raise DomainError("x must be positive")
    big_x = math.exp(math.log(x) / float(a))
    return math.ceil(big_x * _LOG10_E) + 10


def _sum_series(a: Fraction, b: Fraction, z, threshold_digits: int, work: PrecisionContext):
    """One pass at fixed precision.

    Returns ``(sum, largest |term|)``.  The tail after term ``n`` is bounded
    by ``|t_n| rho / (1 - rho)`` once ``a n + b > 0`` and the term ratio
    ``rho`` has dropped below 1: by log-convexity of Gamma the ratios
    ``|z| Gamma(y) / Gamma(y + a)`` decrease from there on.
    """
    mp = work.mp
    zc = mp.mpc(z)
    power = mp.mpc(1)
    total = mp.mpc(0)
    biggest = mp.mpf(0)
    prev = None
    tol = mp.mpf(10) ** (-threshold_digits)
    n = 0
    while True:
        y = a * n + b
        coeff = rgamma_hp(y, work)
        term = power * coeff
        total += term
        size = abs(term)
        if size > biggest:
            biggest = size
        if y > 0 and prev is not None and prev != 0 and size != 0:
            rho = size / prev
            if rho < 1 and size * rho / (1 - rho) < tol * max(1, abs(total)):
                return total, biggest
        # Skip the pre-positive region and exact zeros when forming ratios.
        prev = size if y > 0 else None
        power *= zc
        n += 1


def _ml_adaptive(p: MLParams, target_digits: int, relative: bool, cap: int):
    """Sum until the result carries ``target_digits`` digits.

    With ``relative`` the error is measured against ``|E|`` itself, otherwise
    against ``max(1, |E|)``.
    """
    guard = 10
    zabs = abs(complex(to_complex(p.z, PrecisionContext(20))))
    if zabs == 0:
        work = PrecisionContext(max(16, target_digits), guard)
        return work.mp.mpc(rgamma_hp(p.b, work)), work
    estimate = cancellation_digits(p.a, repr(zabs))
    work_digits = target_digits + estimate + guard
    while True:
        if work_digits > cap:
            raise PrecisionBudgetExceeded(work_digits, cap)
        work = PrecisionContext(max(16, work_digits), guard)
        z = to_complex(p.z, work)
        total, biggest = _sum_series(p.a, p.b, z, work.dps, work)
        mp = work.mp
        if biggest == 0:
            return total, work
        if relative:
            # The tail test is absolute below 1, so count that against |E| too.
            ref, scale = max(mp.mpf(1), biggest), abs(total)
        else:
            ref, scale = biggest, max(mp.mpf(1), abs(total))
        if scale == 0:
            lost = work.dps
        else:
            lost = max(0, math.ceil(float(mp.log10(ref / scale))))
        needed = target_digits + lost + guard
        if needed <= work.dps:
            return total, work
        work_digits = max(needed + guard, work_digits + guard)


def eval_ml_series(p: MLParams, target_digits: int, cap: int = DEFAULT_DIGIT_CAP):
    """E_{a,b}(z) with absolute error below 10**-target_digits * max(1, |E|).

    The value is returned as an mpc of a context carrying
    ``target_digits`` digits.
    """
    if target_digits < 16:
        raise ValueError("target_digits must be >= 16")
    total, _ = _ml_adaptive(p, int(target_digits), relative=False, cap=cap)
    return PrecisionContext(int(target_digits)).mp.mpc(total)


def remainder_direct(a, z, M: int, ctx: PrecisionContext, cap: int = DEFAULT_DIGIT_CAP):
    """R_M(a; z) = z**-M E_{a, 1-aM}(z) for complex ``z``, to ctx.digits relative."""
    a = as_fraction(a)
    if M < 0:
        raise ValueError("M must be nonnegative")
    p = MLParams(a=a, z=z, b=1 - a * M)
    total, work = _ml_adaptive(p, ctx.digits + ctx.guard, relative=True, cap=cap)
    zc = to_complex(z, work)
    return ctx.mp.mpc(total * zc ** (-M))


def recursion_check(a, x, M: int, ctx: PrecisionContext, cap: int = DEFAULT_DIGIT_CAP):
    """R_M(a; -x) by direct summation of E_{a, 1-aM}(-x)."""
    z = -as_fraction(x)
    if z >= 0:
        raise DomainError("x must be positive")
    return remainder_direct(a, z, M, ctx, cap)
