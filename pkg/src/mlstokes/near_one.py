"""Closed-form small-omega coefficients of B_{2k}(pi) for a close to 1.

B_{2k}(pi) = sum_r b_{2k,r} omega**r with omega = pi (1 - a) / a.  Each
b_{2k,r} is a polynomial in (a, nu) with rational coefficients, stored as
``{(power of a, power of nu): coefficient}`` together with an overall
rational scale and a flag saying whether the coefficient carries a factor i.

Two entries, b_{0,3} and b_{4,1}, are stored with the opposite overall sign
to the commonly quoted forms.  ``PUBLISHED_SIGN_FLIPS`` lists them so the
quoted variant can still be reconstructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

from .errors import TableOrderUnavailable
from .precision import PrecisionContext, to_real


@dataclass(frozen=True)
class NearOneCoefficient:
    k2: int
    r: int
    scale: F
    imaginary: bool
    terms: dict

    def evaluate(self, a, nu, ctx: PrecisionContext):
        mp = ctx.mp
        a = mp.mpf(a)
        nu = mp.mpf(nu)
        acc = mp.mpf(0)
        for (pa, pn), c in self.terms.items():
            acc += mp.mpf(c.numerator) / c.denominator * a**pa * nu**pn
        acc *= mp.mpf(self.scale.numerator) / self.scale.denominator
        return mp.mpc(0, acc) if self.imaginary else mp.mpc(acc)


def _b(k2, r, scale, imaginary, terms):
    return NearOneCoefficient(k2, r, F(scale), imaginary, {k: F(v) for k, v in terms.items()})


# (a**i nu**j) -> coefficient
B_TABLE = {
    0: [
        _b(0, 0, 1, False, {(1, 0): F(1, 2), (0, 1): 1, (0, 0): F(-1, 6)}),
        _b(0, 1, F(-1, 12), True, {(2, 0): 1, (1, 1): 6, (0, 2): 6}),
        # 1 + 90 nu (a + nu)(a + 2 nu)
        _b(0, 2, F(-1, 1080), False, {(0, 0): 1, (2, 1): 90, (1, 2): 270, (0, 3): 180}),
        # -(1 + 18 a^4 - 540 nu^2 (a + nu)^2) / 12960; the sign is fixed by the
        # omega-derivatives of the closed-form B_0 (see tests/test_near_one.py)
        _b(0, 3, F(-1, 12960), True,
           {(0, 0): 1, (4, 0): 18, (2, 2): -540, (1, 3): -1080, (0, 4): -540}),
        _b(0, 4, F(1, 181440), False,
           {(0, 0): -1, (4, 1): -252, (2, 3): 2520, (1, 4): 3780, (0, 5): 1512}),
    ],
    1: [
        _b(2, 0, F(1, 1080), False,
           {(0, 0): -2, (1, 0): 45, (2, 0): -45, (0, 1): 90, (1, 1): -270, (2, 1): 90,
            (0, 2): -270, (1, 2): 270, (0, 3): 180}),
        _b(2, 1, F(1, 1440), True,
           {(0, 0): -1, (2, 0): -10, (4, 0): 6, (1, 1): -60, (2, 1): 120, (0, 2): -60,
            (1, 2): 360, (2, 2): -180, (0, 3): 240, (1, 3): -360, (0, 4): -180}),
        _b(2, 2, F(1, 60480), False,
           {(0, 0): 1, (4, 0): -126, (2, 1): -420, (4, 1): 504, (1, 2): -1260,
            (2, 2): 3780, (0, 3): -840, (1, 3): 7560, (2, 3): -5040, (0, 4): 3780,
            (1, 4): -7560, (0, 5): -3024}),
    ],
    2: [
        _b(4, 0, F(1, 181440), False,
           {(0, 0): 65, (1, 0): 105, (2, 0): -630, (4, 0): 210, (0, 1): 210,
            (1, 1): -3780, (2, 1): 4200, (4, 1): -252, (0, 2): -3780, (1, 2): 12600,
            (2, 2): -6300, (0, 3): 8400, (1, 3): -12600, (2, 3): 2520, (0, 4): -6300,
            (1, 4): 3780, (0, 5): 1512}),
        # overall sign fixed against the engine, as for b_{0,3}
        _b(4, 1, F(-1, 1088640), True,
           {(0, 0): 2, (2, 0): 105, (4, 0): -1260, (6, 0): 180, (1, 1): 630,
            (2, 1): -7560, (4, 1): 5040, (0, 2): 630, (1, 2): -22680, (2, 2): 37800,
            (4, 2): -3780, (0, 3): -15120, (1, 3): 75600, (2, 3): -50400,
            (0, 4): 37800, (1, 4): -75600, (2, 4): 18900, (0, 5): -30240,
            (1, 5): 22680, (0, 6): 7560}),
    ],
}


PUBLISHED_SIGN_FLIPS = ((0, 3), (2, 1))


def published_table() -> dict:
    """The table with the quoted signs of ``PUBLISHED_SIGN_FLIPS`` restored."""
    out = {}
    for k, row in B_TABLE.items():
        out[k] = [NearOneCoefficient(c.k2, c.r, -c.scale, c.imaginary, c.terms)
                  if (k, c.r) in PUBLISHED_SIGN_FLIPS else c for c in row]
    return out


def available_orders(k: int) -> int:
    """Number of tabulated r for B_{2k}."""
    if k not in B_TABLE:
        raise TableOrderUnavailable(f"no near-one table for B_{2 * k}")
    return len(B_TABLE[k])


def b_tables_near_one(a, nu, kmax: int, rmax: int, ctx: PrecisionContext | None = None,
                      omega=None, table: dict | None = None) -> list:
    """B_{2k}(pi) for k = 0..kmax from the truncated omega-expansion.

    ``rmax`` is clipped to what is tabulated for each k.  ``omega`` defaults
    to pi (1 - a) / a.  ``table`` swaps in another coefficient table, e.g.
    :func:`published_table`.
    """
    if kmax > 2 or kmax < 0:
        raise TableOrderUnavailable(f"tables cover k <= 2, asked for kmax = {kmax}")
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    av = to_real(a, ctx)
    nuv = to_real(nu, ctx)
    w = mp.pi * (1 - av) / av if omega is None else to_real(omega, ctx)
    out = []
    for k in range(kmax + 1):
        acc = mp.mpc(0)
        for coeff in (table or B_TABLE)[k][: rmax + 1]:
            acc += coeff.evaluate(av, nuv, ctx) * w**coeff.r
        out.append(acc)
    return out
