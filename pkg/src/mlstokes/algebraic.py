"""Inverse-power expansion of E_a(-x), its optimal truncation, and the
exponentially small residue left after subtracting it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PrecisionBudgetExceeded, TruncationOverflow
from .oracle import DEFAULT_DIGIT_CAP, MLParams, cancellation_digits, eval_ml_series
from .precision import PrecisionContext, as_fraction, to_real
from .specfun import gamma_hp

DEFAULT_M_CAP = 10**6


@dataclass(frozen=True)
class TruncationData:
    """Optimal index ``M`` with ``a M = X + nu`` and ``X = x**(1/a)``."""

    M: int
    nu: object
    X: object


def _check_a(a: Fraction, allow_one: bool = True):
    if not (0 < a < 1 or (allow_one and a == 1)):
        raise DomainError(f"need 0 < a < 1, got a = {a}")


def _check_x(x: Fraction):
    if x <= 0:
        raise DomainError(f"x must be positive, got {x}")


def big_x(a, x, ctx: PrecisionContext):
    """X = x**(1/a)."""
    mp = ctx.mp
    return mp.exp(mp.log(to_real(x, ctx)) / to_real(a, ctx))


def optimal_truncation(a, x, ctx: PrecisionContext | None = None,
                       cap: int = DEFAULT_M_CAP) -> TruncationData:
    """M = X/a rounded to nearest (ties to even); nu = a M - X.

    ``a = 1`` is accepted as the limiting case, where every algebraic term
    vanishes.
    """
    ctx = ctx or PrecisionContext()
    a = as_fraction(a)
    x = as_fraction(x)
    _check_a(a)
    _check_x(x)
    X = big_x(a, x, ctx)
    ratio = X / to_real(a, ctx)
    if ratio > cap:
        raise TruncationOverflow(f"optimal index {int(ratio)} exceeds cap {cap}")
    # mpmath rounds exact ties to even.
    M = max(1, int(ctx.mp.nint(ratio)))
    nu = to_real(a, ctx) * M - X
    return TruncationData(M=M, nu=nu, X=X)


def algebraic_term(a, x, k: int, ctx: PrecisionContext):
    """-(-x)**-k / Gamma(1 - a k), via Gamma(a k) sin(pi a k) / pi.

    Exactly zero when a k is a positive integer.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    a = as_fraction(a)
    x = as_fraction(x)
    mp = ctx.mp
    ak = a * k
    if ak.denominator == 1:
        return mp.mpf(0)
    reduced = ak - 2 * math.floor(ak / 2)
    sign = 1 if k % 2 else -1
    return sign * gamma_hp(ak, ctx) * mp.sinpi(to_real(reduced, ctx)) / (mp.pi * to_real(x, ctx) ** k)


def algebraic_partial_sum(a, x, M: int, ctx: PrecisionContext):
    """Sum of :func:`algebraic_term` for k = 1..M.

    The terms are O(1/x) at most, so the context precision already bounds
    the error relative to the largest term.
    """
    if M < 0:
        raise ValueError("M must be nonnegative")
    total = ctx.mp.mpf(0)
    for k in range(1, M + 1):
        total += algebraic_term(a, x, k, ctx)
    return total


@dataclass(frozen=True)
class ScriptE:
    value: object
    oracle: object
    partial_sum: object
    trunc: TruncationData
    work_digits: int


def script_E_detail(a, x, ctx: PrecisionContext, cap: int = DEFAULT_DIGIT_CAP) -> ScriptE:
    """E_a(-x) plus the optimally truncated sum, with the parts it came from.

    The residue is about e**-X against O(1/x) inputs, so the summation runs
    at ``cancellation_digits + digits + guard``; if the residue turns out
    smaller than expected the precision is raised and the work repeated.
    """
    a = as_fraction(a)
    x = as_fraction(x)
    _check_a(a)
    _check_x(x)
    target = ctx.digits + ctx.guard + cancellation_digits(a, x)
    while True:
        work = PrecisionContext(target, ctx.guard)
        trunc = optimal_truncation(a, x, work)
        oracle = eval_ml_series(MLParams(a=a, z=-x), target, cap=cap).real
        oracle = work.mp.mpf(oracle)
        partial = algebraic_partial_sum(a, x, trunc.M, work)
        value = oracle - partial
        if value == 0:
            significant = 0
        else:
            significant = target + math.floor(float(work.mp.log10(abs(value))))
        if a == 1 or significant >= ctx.digits + ctx.guard // 2:
            break
        target += ctx.digits + ctx.guard - significant + ctx.guard
        if target > cap:
            raise PrecisionBudgetExceeded(target, cap)
    mp = ctx.mp
    return ScriptE(
        value=mp.mpf(value),
        oracle=mp.mpf(oracle),
        partial_sum=mp.mpf(partial),
        trunc=TruncationData(M=trunc.M, nu=mp.mpf(trunc.nu), X=mp.mpf(trunc.X)),
        work_digits=target,
    )


def script_E(a, x, ctx: PrecisionContext):
    """The residue E_a(-x) + sum_{k<=M} (-x)**-k / Gamma(1 - a k)."""
    return script_E_detail(a, x, ctx).value
