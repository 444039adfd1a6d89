"""Working-precision contexts and truncated power-series algebra.

Every numeric routine in the package takes a :class:`PrecisionContext`.  A
context owns a private :class:`mpmath.MPContext` whose precision is fixed at
construction, so values built through ``ctx.mp`` never depend on mpmath's
global state and contexts can be shared freely between threads.

Power series are finite, immutable coefficient tuples.  Arithmetic on two
series of order ``N`` returns a series of order ``N``; anything beyond is
dropped without comment, so callers pick the order with spare terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath
from mpmath import MPContext

from .errors import (
    CompositionRequiresZeroConstantTerm,
    DivisionBySingularSeries,
    NonFiniteResult,
    NotRevertible,
)

Real = Union[int, float, str, Fraction, Decimal, "mpmath.mpf"]


@lru_cache(maxsize=None)
def _mp_for(dps: int) -> MPContext:
    # Contexts are never mutated after this point, so sharing is safe.
    mp = MPContext()
    mp.dps = dps
    return mp


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal digit budget for a computation.

    ``digits`` is the accuracy promised to the caller; ``guard`` extra digits
    are carried internally on top of it.
    """

    digits: int = 30
    guard: int = 10
    mp: MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < 16:
            raise ValueError(f"digits must be an integer >= 16, got {self.digits!r}")
        if int(self.guard) != self.guard or self.guard < 5:
            raise ValueError(f"guard must be an integer >= 5, got {self.guard!r}")
        object.__setattr__(self, "mp", _mp_for(int(self.digits + self.guard)))

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    def raised(self, extra: int) -> PrecisionContext:
        """Return a context with ``extra`` more promised digits."""
        return PrecisionContext(self.digits + max(0, int(extra)), self.guard)

    @property
    def eps(self):
        return self.mp.mpf(10) ** (-self.digits)


# ---------------------------------------------------------------------------
# Exact conversion of user inputs


def as_fraction(value: Real) -> Fraction:
    """Exact rational value of ``value``.

    Floats go through their shortest repr, so ``0.99`` means the decimal
    0.99 rather than the nearest binary double.  Strings accept anything
    :class:`fractions.Fraction` does, e.g. ``"1/3"`` or ``"1e-6"``.
    mpf values are exact binary rationals and convert without loss.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a real number here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise NonFiniteResult(f"non-finite input {value!r}")
        return Fraction(repr(value))
    if isinstance(value, (str, Decimal)):
        return Fraction(str(value).strip())
    if hasattr(value, "_mpf_"):
        num, den = mpmath.libmp.to_rational(value._mpf_)
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot interpret {value!r} as a real number")


def to_real(value, ctx: PrecisionContext):
    """``value`` as an mpf of ``ctx``.  Rationals are rounded once."""
    mp = ctx.mp
    if hasattr(value, "_mpf_"):
        return mp.mpf(value)
    q = as_fraction(value)
    if q.denominator == 1:
        return mp.mpf(q.numerator)
    return mp.mpf(q.numerator) / q.denominator


def to_complex(value, ctx: PrecisionContext):
    if hasattr(value, "_mpc_"):
        return ctx.mp.mpc(value)
    if isinstance(value, complex):
        return ctx.mp.mpc(value.real, value.imag)
    return ctx.mp.mpc(to_real(value, ctx))


@dataclass(frozen=True)
class PiMultiple:
    """An angle given exactly as ``coef * pi``."""

    coef: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coef", as_fraction(self.coef))

    def value(self, ctx: PrecisionContext):
        return to_real(self.coef, ctx) * ctx.mp.pi

    def __float__(self) -> float:
        return float(self.coef) * math.pi


def angle(theta, ctx: PrecisionContext):
    if isinstance(theta, PiMultiple):
        return theta.value(ctx)
    return to_real(theta, ctx)


def check_finite(value, what: str = "result"):
    mp = mpmath.mp
    if hasattr(value, "_mpc_"):
        ok = mp.isfinite(value.real) and mp.isfinite(value.imag)
    else:
        ok = mp.isfinite(value)
    if not ok:
        raise NonFiniteResult(f"{what} is not finite: {value}")
    return value


# ---------------------------------------------------------------------------
# Truncated power series


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``coeffs[r]`` of ``u**r`` for ``r < order``."""

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, r):
        return self.coeffs[r]

    def __iter__(self):
        return iter(self.coeffs)

    @classmethod
    def from_values(cls, values: Iterable, ctx: PrecisionContext) -> TruncatedSeries:
        coeffs = tuple(check_finite(to_complex(v, ctx), "series coefficient") for v in values)
        return cls(coeffs)

    @classmethod
    def zeros(cls, order: int, ctx: PrecisionContext) -> TruncatedSeries:
        return cls((ctx.mp.mpc(0),) * order)

    @classmethod
    def constant(cls, value, order: int, ctx: PrecisionContext) -> TruncatedSeries:
        zero = ctx.mp.mpc(0)
        return cls((to_complex(value, ctx),) + (zero,) * (order - 1))

    @classmethod
    def identity(cls, order: int, ctx: PrecisionContext) -> TruncatedSeries:
        """The series ``u`` itself."""
        mp = ctx.mp
        vals = [mp.mpc(0)] * order
        if order > 1:
            vals[1] = mp.mpc(1)
        return cls(tuple(vals))

    def truncate(self, order: int) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs[:order])

    def max_abs_deviation(self, other: TruncatedSeries):
        return max(abs(p - q) for p, q in zip(self.coeffs, other.coeffs))


def _check_orders(lhs: TruncatedSeries, rhs: TruncatedSeries):
    if lhs.order != rhs.order:
        raise ValueError(f"series orders differ: {lhs.order} != {rhs.order}")


def _mul(p: Sequence, q: Sequence, n: int, zero) -> list:
    out = []
    for k in range(n):
        acc = zero
        for i in range(k + 1):
            acc += p[i] * q[k - i]
        out.append(acc)
    return out


def _div(p: Sequence, q: Sequence, n: int) -> list:
    if q[0] == 0:
        raise DivisionBySingularSeries("divisor has zero constant term")
    inv0 = 1 / q[0]
    out = []
    for k in range(n):
        acc = p[k]
        for i in range(1, k + 1):
            acc -= q[i] * out[k - i]
        out.append(acc * inv0)
    return out


def series_arith(lhs: TruncatedSeries, rhs: TruncatedSeries, op: str,
                 ctx: PrecisionContext) -> TruncatedSeries:
    """Add, subtract, multiply or divide two series of equal order."""
    _check_orders(lhs, rhs)
    mp = ctx.mp
    p = [mp.mpc(c) for c in lhs.coeffs]
    q = [mp.mpc(c) for c in rhs.coeffs]
    n = lhs.order
    if op == "add":
        out = [x + y for x, y in zip(p, q)]
    elif op == "sub":
        out = [x - y for x, y in zip(p, q)]
    elif op == "mul":
        out = _mul(p, q, n, mp.mpc(0))
    elif op == "div":
        out = _div(p, q, n)
    else:
        raise ValueError(f"unknown series operation {op!r}")
    for c in out:
        check_finite(c, "series coefficient")
    return TruncatedSeries(tuple(out))


def series_scale(s: TruncatedSeries, factor, ctx: PrecisionContext) -> TruncatedSeries:
    f = to_complex(factor, ctx)
    return TruncatedSeries(tuple(f * ctx.mp.mpc(c) for c in s.coeffs))


def series_add_constant(s: TruncatedSeries, value, ctx: PrecisionContext) -> TruncatedSeries:
    coeffs = [ctx.mp.mpc(c) for c in s.coeffs]
    coeffs[0] += to_complex(value, ctx)
    return TruncatedSeries(tuple(coeffs))


def series_shift_down(s: TruncatedSeries) -> TruncatedSeries:
    """Divide by ``u``; the order drops by one."""
    if s.order and s[0] != 0:
        raise ValueError("series is not divisible by u")
    return TruncatedSeries(s.coeffs[1:])


def series_derivative(s: TruncatedSeries, ctx: PrecisionContext) -> TruncatedSeries:
    """Formal derivative, padded with a zero to keep the order."""
    mp = ctx.mp
    coeffs = [r * mp.mpc(s[r]) for r in range(1, s.order)] + [mp.mpc(0)]
    return TruncatedSeries(tuple(coeffs))


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries,
                   ctx: PrecisionContext) -> TruncatedSeries:
    """``outer(inner(u))``; ``inner`` must have zero constant term."""
    _check_orders(outer, inner)
    if inner.order and inner[0] != 0:
        raise CompositionRequiresZeroConstantTerm(f"inner[0] = {inner[0]}")
    mp = ctx.mp
    n = outer.order
    zero = mp.mpc(0)
    q = [mp.mpc(c) for c in inner.coeffs]
    acc = [zero] * n
    # Horner in the series ring.
    for k in range(n - 1, -1, -1):
        acc = _mul(acc, q, n, zero)
        acc[0] += mp.mpc(outer[k])
    return TruncatedSeries(tuple(acc))


def series_revert(s: TruncatedSeries, ctx: PrecisionContext) -> TruncatedSeries:
    """Compositional inverse ``r`` with ``s(r(u)) = u`` to the series order.

    Newton iteration ``r <- r - (s(r) - u) / s'(r)``; each step doubles the
    number of correct coefficients.
    """
    if s.order < 2 or s[0] != 0 or s[1] == 0:
        raise NotRevertible("need s[0] == 0 and s[1] != 0")
    mp = ctx.mp
    n = s.order
    ident = TruncatedSeries.identity(n, ctx)
    ds = series_derivative(s, ctx)
    r = series_scale(ident, 1 / mp.mpc(s[1]), ctx)
    correct = 2
    while True:
        resid = series_arith(series_compose(s, r, ctx), ident, "sub", ctx)
        step = series_arith(resid, series_compose(ds, r, ctx), "div", ctx)
        r = series_arith(r, step, "sub", ctx)
        if correct >= n:
            break
        correct *= 2
    return r


def _coefficient_series(values: Iterable, ctx: PrecisionContext) -> TruncatedSeries:
    return TruncatedSeries(tuple(ctx.mp.mpc(v) for v in values))


def series_exp(s: TruncatedSeries, ctx: PrecisionContext) -> TruncatedSeries:
    mp = ctx.mp
    n = s.order
    fact = [mp.mpf(1)]
    for k in range(1, n):
        fact.append(fact[-1] / k)
    base = series_add_constant(s, -mp.mpc(s[0]), ctx)
    out = series_compose(_coefficient_series(fact, ctx), base, ctx)
    return series_scale(out, mp.exp(mp.mpc(s[0])), ctx)


def series_log(s: TruncatedSeries, ctx: PrecisionContext) -> TruncatedSeries:
    """Principal-branch logarithm; needs a nonzero constant term."""
    mp = ctx.mp
    s0 = mp.mpc(s[0])
    if s0 == 0:
        raise DivisionBySingularSeries("log of a series with zero constant term")
    n = s.order
    log1p = [mp.mpf(0)] + [mp.mpf((-1) ** (k + 1)) / k for k in range(1, n)]
    v = series_add_constant(series_scale(s, 1 / s0, ctx), -1, ctx)
    out = series_compose(_coefficient_series(log1p, ctx), v, ctx)
    return series_add_constant(out, mp.log(s0), ctx)


def series_pow(s: TruncatedSeries, p, ctx: PrecisionContext) -> TruncatedSeries:
    """``s**p`` on the principal branch, via ``exp(p log s)``."""
    return series_exp(series_scale(series_log(s, ctx), p, ctx), ctx)
