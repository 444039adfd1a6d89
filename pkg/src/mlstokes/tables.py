"""Published reference values and digit-level comparison against them.

Values are stored as the printed decimal strings.  A cell printed with a
bold digit (the first digit where the asymptotic value departs from the
directly computed residue) only has to agree to within one unit in that
digit's place; every other cell has to agree to half a unit in its last
printed digit (or in digit ``required`` when a coarser check is asked for).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from .algebraic import optimal_truncation, script_E_detail
from .errors import ValidityWarning
from .oracle import recursion_check
from .precision import PrecisionContext, as_fraction
from .stokes import THETA_PI, exp_small_remainder, f_coefficients, make_geometry


@dataclass(frozen=True)
class ReferenceValue:
    text: str
    bold: int | None = None
    required: int | None = None

    @property
    def decimal(self) -> Decimal:
        return Decimal(self.text)

    @property
    def printed_digits(self) -> int:
        return len(self.decimal.as_tuple().digits)

    @property
    def exponent(self) -> int:
        """Decimal exponent of the leading digit."""
        d = self.decimal
        return d.adjusted()


@dataclass
class CellCheck:
    label: str
    computed: Decimal
    expected: ReferenceValue
    matched_digits: int
    tolerance: Decimal
    ok: bool
    rule: str

    def as_dict(self) -> dict:
        return {
            "cell": self.label,
            "computed": format_sci(self.computed, self.expected.printed_digits + 2),
            "expected": self.expected.text,
            "matched_digits": self.matched_digits,
            "printed_digits": self.expected.printed_digits,
            "rule": self.rule,
            "ok": self.ok,
        }


def to_decimal(value, digits: int = 40) -> Decimal:
    import mpmath

    return Decimal(mpmath.nstr(value, digits, min_fixed=1, max_fixed=0)
                   if value != 0 else "0")


def format_sci(value, digits: int) -> str:
    """Scientific notation with ``digits`` significant digits, ties to even."""
    d = value if isinstance(value, Decimal) else to_decimal(value, digits + 10)
    if d == 0:
        return ("0." + "0" * (digits - 1) if digits > 1 else "0") + "e+0"
    return f"{d:.{max(digits - 1, 0)}e}"


def check_cell(label: str, computed, expected: ReferenceValue) -> CellCheck:
    c = computed if isinstance(computed, Decimal) else to_decimal(computed)
    p = expected.decimal
    e = expected.exponent
    diff = abs(c - p)
    n_printed = expected.printed_digits
    matched = 0
    for n in range(1, n_printed + 1):
        if diff <= Decimal(5) * Decimal(10) ** (e - n):
            matched = n
        else:
            break
    if expected.bold is not None:
        tol = Decimal(10) ** (e - expected.bold + 1)
        ok = diff < tol
        rule = f"within one unit of bold digit {expected.bold}"
    else:
        n_req = expected.required or n_printed
        tol = Decimal(5) * Decimal(10) ** (e - n_req)
        ok = diff <= tol
        rule = f"half unit in digit {n_req}"
    return CellCheck(label, c, expected, matched, tol, ok, rule)


# ---------------------------------------------------------------------------
# Printed tables


def _pv(text, bold=None, required=None):
    return ReferenceValue(text.replace(" ", ""), bold, required)


TABLE1_A = Fraction(99, 100)
TABLE1_X = Fraction(40)
TABLE1_M = 42
TABLE1_NU = "0.0614272718"
TABLE1_SIG = 10
# B_{2k}(pi), k = 0..6 (real part, imaginary part)
TABLE1 = [
    ("+3.8975364113e-1", "-3.6166205223e-3"),
    ("-6.4791569264e-3", "-2.2873163550e-5"),
    ("+1.1939771912e-3", "+2.9428888000e-5"),
    ("+6.7326294689e-5", "-3.3561255923e-7"),
    ("+6.4497172230e-6", "-2.2913466614e-7"),
    ("-4.9612005443e-7", "+4.0896790580e-9"),
    ("-3.8100530725e-8", "+1.6905896799e-9"),
]

TABLE2_X = Fraction(40)
TABLE2_COLUMNS = {
    "i": {
        "a": Fraction(99, 100),
        "M": 42,
        "R": [
            _pv("1.56895 52145 63456e-19", bold=4),
            _pv("1.56913 08832 53406e-19", bold=7),
            _pv("1.56913 32394 39717e-19", bold=9),
            _pv("1.56913 32235 20415e-19", bold=11),
            _pv("1.56913 32232 61265e-19", bold=13),
            _pv("1.56913 32232 65555e-19", bold=14),
            _pv("1.56913 32232 65644e-19", bold=16),
        ],
        "E": _pv("1.56913 32232 65642e-19", required=15),
    },
    "ii": {
        "a": Fraction(995, 1000),
        "M": 20,
        "R": [
            _pv("1.37899 77500 62528e-09", bold=6),
            _pv("1.37891 00449 63445e-09", bold=6),
            _pv("1.37890 98868 81488e-09", bold=8),
            _pv("1.37890 99084 34786e-09", bold=11),
            _pv("1.37890 99085 29609e-09", bold=12),
            _pv("1.37890 99085 08309e-09", bold=14),
            _pv("1.37890 99085 08144e-09", bold=15),
        ],
        "E": _pv("1.37890 99085 08192e-09", required=15),
    },
}
# The caption gives x = 40 for both columns; column (ii) is tested under both.
TABLE2_II_HYPOTHESES = (Fraction(40), Fraction(20))

TABLE3_KMAX = 5
# a, x, printed M, script E, R_M
TABLE3 = [
    ("0.95", 20, 25, _pv("-2.521343 284521e-11"), _pv("-2.521343 284522e-11", bold=13)),
    ("0.90", 20, 21, _pv("-2.706560 459479e-13"), _pv("-2.706560 459478e-13", bold=13)),
    ("0.80", 20, 53, _pv("-4.827618 810882e-20"), _pv("-4.827618 810882e-20")),
    ("0.70", 15, 68, _pv("-3.052228 407002e-23"), _pv("-3.052228 407002e-23")),
    ("0.60", 10, 77, _pv("-6.895973 422484e-22"), _pv("-6.895973 422484e-22")),
    ("0.50", 5, 50, _pv("-1.106145 146730e-12"), _pv("-1.106145 146730e-12")),
    ("1/3", 3, 81, _pv("+8.345377 837784e-14"), _pv("+8.345377 837735e-14", bold=12)),
    ("0.25", 3, 324, _pv("-1.220075 244872e-37"), _pv("-1.220075 244872e-37")),
]


@dataclass
class TableResult:
    table: str
    cells: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.cells)

    def as_dict(self) -> dict:
        return {
            "table": self.table,
            "passed": self.passed,
            "cells": [c.as_dict() for c in self.cells],
            "notes": list(self.notes),
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------------------
# Reproduction


def table1_coefficients(ctx: PrecisionContext, kmax: int = 6):
    trunc = optimal_truncation(TABLE1_A, TABLE1_X, ctx.raised(40))
    geom = make_geometry(THETA_PI, TABLE1_A, ctx)
    return trunc, f_coefficients(TABLE1_A, trunc.nu, geom, kmax, ctx)


def reproduce_table1(ctx: PrecisionContext | None = None) -> TableResult:
    ctx = ctx or PrecisionContext(60)
    trunc, coeffs = table1_coefficients(ctx)
    out = TableResult("1")
    out.notes.append(f"M = {trunc.M}, nu = {format_sci(trunc.nu, 12)}")
    if trunc.M != TABLE1_M:
        out.cells.append(CellCheck("M", Decimal(trunc.M), _pv(str(TABLE1_M)), 0,
                                   Decimal(0), False, "exact"))
    for k, (re_text, im_text) in enumerate(TABLE1):
        b = coeffs.B[k]
        for part, text, val in (("re", re_text, b.real), ("im", im_text, b.imag)):
            pv = ReferenceValue(text, required=TABLE1_SIG)
            out.cells.append(check_cell(f"B{2 * k}.{part}", val, pv))
    for cell in out.cells:
        if not cell.ok and cell.label.startswith("B"):
            mismatch_sign = cell.computed * cell.expected.decimal < 0
            if mismatch_sign:
                out.notes.append(
                    f"{cell.label}: computed magnitude agrees but the printed sign is opposite; "
                    "Table 2 rows k >= {0} are only reproduced with the computed sign".format(
                        int(cell.label[1:].split(".")[0]) // 2))
    return out


def _table2_column(name: str, x: Fraction, ctx: PrecisionContext, out: TableResult):
    col = TABLE2_COLUMNS[name]
    a = col["a"]
    detail = script_E_detail(a, x, ctx)
    out.cells.append(check_cell(f"({name}) script_E", detail.value, col["E"]))
    if detail.trunc.M != col["M"]:
        out.notes.append(f"({name}) optimal M = {detail.trunc.M}, printed {col['M']}")
    for k, expected in enumerate(col["R"]):
        rep = exp_small_remainder(a, x, k, ctx)
        out.cells.append(check_cell(f"({name}) R_M k={k}", rep.value, expected))


def reproduce_table2(ctx: PrecisionContext | None = None) -> TableResult:
    ctx = ctx or PrecisionContext(30)
    out = TableResult("2")
    _table2_column("i", TABLE2_X, ctx, out)
    col = TABLE2_COLUMNS["ii"]
    matched = None
    for x in TABLE2_II_HYPOTHESES:
        detail = script_E_detail(col["a"], x, ctx)
        chk = check_cell("(ii) script_E", detail.value, col["E"])
        out.notes.append(
            f"(ii) hypothesis x = {x}: M = {detail.trunc.M}, script_E = "
            f"{format_sci(detail.value, 16)} -> {'match' if chk.ok else 'no match'}")
        if chk.ok and matched is None:
            matched = x
    if matched is None:
        out.notes.append("(ii) neither x hypothesis reproduces the printed script_E")
        out.cells.append(check_cell("(ii) script_E", script_E_detail(col["a"], TABLE2_X, ctx).value,
                                    col["E"]))
    else:
        if matched != TABLE2_X:
            out.notes.append(f"(ii) printed caption says x = {TABLE2_X}; values correspond to x = {matched}")
        _table2_column("ii", matched, ctx, out)
    return out


def reproduce_table3(ctx: PrecisionContext | None = None) -> TableResult:
    ctx = ctx or PrecisionContext(30)
    out = TableResult("3")
    for a_text, x, m_printed, e_expected, r_expected in TABLE3:
        a = as_fraction(a_text)
        detail = script_E_detail(a, x, ctx)
        label = f"a={a_text} x={x}"
        out.cells.append(check_cell(f"{label} script_E", detail.value, e_expected))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ValidityWarning)
            rep = exp_small_remainder(a, x, TABLE3_KMAX, ctx)
        for w in caught:
            out.warnings.append(f"{label}: {w.message}")
        out.cells.append(check_cell(f"{label} R_M", rep.value, r_expected))
        if detail.trunc.M != m_printed:
            alt = recursion_check(a, x, m_printed, ctx)
            alt_chk = check_cell(f"{label} script_E at printed M", alt.real, e_expected)
            out.notes.append(
                f"{label}: optimal M = {detail.trunc.M}, printed M = {m_printed}; residue with "
                f"M = {m_printed} is {format_sci(alt.real, 13)} "
                f"({'matches' if alt_chk.ok else 'does not match'} the printed script_E), "
                f"with M = {detail.trunc.M} it "
                f"{'matches' if out.cells[-2].ok else 'does not match'}")
    return out
