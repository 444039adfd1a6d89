"""Command-line front end.

    python -m mlstokes eval --a 0.95 --x 20 --kmax 5
    python -m mlstokes compare --a 0.99 --x 40
    python -m mlstokes repro-table2 --format text
    python -m mlstokes fig1-locus --a 0.8 --out locus.csv

Exit codes: 0 ok, 1 table mismatch, 2 usage error, 3 precision budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .algebraic import script_E_detail
from .errors import DomainError, MLStokesError, PrecisionBudgetExceeded, ValidityWarning
from .precision import PrecisionContext, as_fraction
from .stokes import (
    DEFAULT_KMAX,
    exp_small_remainder,
    exp_small_two_sided,
    leading_order_estimate,
    make_geometry,
)
from .tables import format_sci, reproduce_table1, reproduce_table2, reproduce_table3

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
COMMANDS = ("eval", "compare", "repro-table1", "repro-table2", "repro-table3", "fig1-locus")
DEFAULT_DIGITS = 30
DEFAULT_SAMPLES = 400


@dataclass(frozen=True)
class RunConfig:
    command: str
    a: Fraction | None
    x: Fraction | None
    kmax: int
    digits: int
    format: str
    output_path: str | None = None
    theta: Fraction | None = None
    samples: int = DEFAULT_SAMPLES


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=_rational, help="order a in (0, 1]")
    common.add_argument("--x", type=_rational, help="positive argument, E_a(-x)")
    common.add_argument("--theta", type=_rational,
                        help="phase of z = x e^{i theta}, in units of pi (compare only)")
    common.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
    common.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--out", dest="output_path", default=None)
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="interior sample count for fig1-locus")

    parser = argparse.ArgumentParser(prog="mlstokes", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eval": "oracle, partial sum, residue and asymptotic remainder at one point",
        "compare": "remainder at every truncation level against the residue",
        "repro-table1": "coefficients B_2k(pi) for a = 0.99, x = 40",
        "repro-table2": "remainder against truncation level for a near 1",
        "repro-table3": "residue and remainder for a from 0.95 down to 0.25",
        "fig1-locus": "c(theta) over 0 < theta < 3 pi a",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    fmt = ns.format or ("csv" if ns.command == "fig1-locus" else "json")
    cfg = RunConfig(ns.command, ns.a, ns.x, ns.kmax, ns.digits, fmt, ns.output_path,
                    ns.theta, ns.samples)
    problems = []
    if cfg.digits < 16:
        problems.append("--digits must be >= 16")
    if cfg.kmax < 0:
        problems.append("--kmax must be >= 0")
    if cfg.a is not None and not 0 < cfg.a <= 1:
        problems.append("--a must lie in (0, 1]")
    if cfg.x is not None and cfg.x <= 0:
        problems.append("--x must be positive")
    if cfg.command in ("eval", "compare") and (cfg.a is None or cfg.x is None):
        problems.append(f"{cfg.command} needs --a and --x")
    if cfg.command == "fig1-locus":
        if cfg.a is None:
            problems.append("fig1-locus needs --a")
        elif cfg.a == 1:
            problems.append("fig1-locus needs a < 1")
        if cfg.samples < 1:
            problems.append("--samples must be >= 1")
    if problems:
        parser.error("; ".join(problems))
    return cfg


# ---------------------------------------------------------------------------
# Number emission


def num(value, digits: int) -> dict:
    digits = max(int(digits), 1)
    return {"value": format_sci(value, digits), "digits_claimed": digits}


def cnum(value, digits: int) -> dict:
    digits = max(int(digits), 1)
    return {"re": format_sci(value.real, digits), "im": format_sci(value.imag, digits),
            "digits_claimed": digits}


def _digits_from_error(value, err, cap: int) -> int:
    """Significant digits of ``value`` backed by an absolute error ``err``."""
    if value == 0:
        return 1
    if err == 0:
        return cap
    return max(1, min(cap, math.floor(math.log10(abs(float(value)) / float(err)))))


def _exact_text(q: Fraction) -> str:
    return str(q)


# ---------------------------------------------------------------------------
# Commands


def _capture(func, *args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ValidityWarning)
        out = func(*args)
    return out, [str(w.message) for w in caught if issubclass(w.category, ValidityWarning)]


def cmd_eval(cfg: RunConfig) -> tuple[dict, int]:
    ctx = PrecisionContext(cfg.digits)
    d = cfg.digits
    detail = script_E_detail(cfg.a, cfg.x, ctx)
    rep, notes = _capture(exp_small_remainder, cfg.a, cfg.x, cfg.kmax, ctx)
    E = detail.value
    R = rep.value
    if E != 0:
        rel = abs(E - R) / abs(E)
    else:
        rel = abs(E - R)
    r_digits = _digits_from_error(R, rep.est_error, d) if cfg.a != 1 else d
    trunc = detail.trunc
    results = {
        "oracle": num(detail.oracle, d),
        "partial_sum": num(detail.partial_sum, d),
        "script_E": num(E, d),
        "R_M": num(R, r_digits),
        "terms": [cnum(t, d) for t in rep.series_terms],
        "erfc_term": cnum(rep.erfc_term, d),
        "est_error": num(rep.est_error, 2),
        "rel_dev": num(rel, 2),
    }
    doc = {
        "command": cfg.command,
        "inputs": {"a": _exact_text(cfg.a), "x": _exact_text(cfg.x), "kmax": cfg.kmax,
                   "digits": cfg.digits},
        "truncation": {"M": trunc.M, "nu": num(trunc.nu, d), "X": num(trunc.X, d)},
        "results": results,
        "digits_claimed": min(d, r_digits),
        "warnings": notes,
    }
    return doc, EXIT_OK


def cmd_compare(cfg: RunConfig) -> tuple[dict, int]:
    ctx = PrecisionContext(cfg.digits)
    d = cfg.digits
    detail = script_E_detail(cfg.a, cfg.x, ctx)
    E = detail.value
    rows = []
    notes = []
    for k in range(cfg.kmax + 1):
        rep, w = _capture(exp_small_remainder, cfg.a, cfg.x, k, ctx)
        notes.extend(n for n in w if n not in notes)
        dev = abs(E - rep.value) / abs(E) if E != 0 else abs(E - rep.value)
        rows.append({
            "k": k,
            "R_M": num(rep.value, _digits_from_error(rep.value, rep.est_error, d)),
            "est_error": num(rep.est_error, 2),
            "rel_dev": num(dev, 2),
        })
    lead, w = _capture(leading_order_estimate, cfg.a, cfg.x, ctx)
    notes.extend(n for n in w if n not in notes)
    doc = {
        "command": cfg.command,
        "inputs": {"a": _exact_text(cfg.a), "x": _exact_text(cfg.x), "kmax": cfg.kmax,
                   "digits": cfg.digits},
        "truncation": {"M": detail.trunc.M, "nu": num(detail.trunc.nu, d),
                       "X": num(detail.trunc.X, d)},
        "results": {
            "script_E": num(E, d),
            "levels": rows,
            "leading_order": num(lead, 3),
        },
        "digits_claimed": d,
        "warnings": notes,
    }
    if cfg.theta is not None:
        from .oracle import remainder_direct
        from .precision import PiMultiple

        theta = PiMultiple(cfg.theta)
        value, upper, lower = exp_small_two_sided(cfg.a, cfg.x, theta, cfg.kmax, ctx)
        err = upper.est_error + lower.est_error
        mp = ctx.raised(10).mp
        z = mp.mpf(cfg.x.numerator) / cfg.x.denominator * mp.expjpi(mp.mpf(cfg.theta.numerator)
                                                                     / cfg.theta.denominator)
        direct = remainder_direct(cfg.a, z, detail.trunc.M, ctx)
        doc["results"]["theta"] = {
            "theta_over_pi": _exact_text(cfg.theta),
            "asymptotic": cnum(value, _digits_from_error(abs(value), err, d)),
            "est_error": num(err, 2),
            "direct": cnum(direct, d),
            "rel_dev": num(abs(value - direct) / abs(direct), 2),
        }
    return doc, EXIT_OK


def cmd_repro_table(cfg: RunConfig) -> tuple[dict, int]:
    which = cfg.command[-1]
    runner = {"1": reproduce_table1, "2": reproduce_table2, "3": reproduce_table3}[which]
    ctx = PrecisionContext(max(cfg.digits, 60) if which == "1" else cfg.digits)
    result = runner(ctx)
    doc = {"command": cfg.command, "inputs": {"digits": ctx.digits}}
    doc.update(result.as_dict())
    return doc, EXIT_OK if result.passed else EXIT_MISMATCH


def locus_rows(a: Fraction, samples: int, digits: int = 20) -> list[dict]:
    """c(theta) at theta = j 3 pi a / (samples + 1), j = 0..samples+1, plus theta = pi a.

    The row at pi a has c = 0 and an undefined argument.  Both endpoints
    are included.
    """
    from .precision import PiMultiple

    ctx = PrecisionContext(digits)
    n = samples + 1
    coefs = {Fraction(3 * j, n) * a for j in range(n + 1)}
    coefs.add(a)
    rows = []
    for coef in sorted(coefs):
        geom = make_geometry(PiMultiple(coef), a, ctx)
        c = geom.c
        if coef == a:
            region = "pole"
            arg = None
        else:
            region = "endpoint" if coef in (0, 3 * a) else "interior"
            arg = ctx.mp.arg(c)
        rows.append({"theta": geom.theta, "re_c": c.real, "im_c": c.imag, "arg_c": arg,
                     "region": region})
    return rows


def cmd_fig1_locus(cfg: RunConfig) -> tuple[dict, int]:
    rows = locus_rows(cfg.a, cfg.samples)
    d = 15
    out = []
    for r in rows:
        out.append({
            "theta": format_sci(r["theta"], d),
            "re_c": format_sci(r["re_c"], d),
            "im_c": format_sci(r["im_c"], d),
            "arg_c": "" if r["arg_c"] is None else format_sci(r["arg_c"], d),
            "region": r["region"],
        })
    doc = {"command": cfg.command, "inputs": {"a": _exact_text(cfg.a), "samples": cfg.samples},
           "digits_claimed": d, "rows": out}
    return doc, EXIT_OK


HANDLERS = {
    "eval": cmd_eval,
    "compare": cmd_compare,
    "repro-table1": cmd_repro_table,
    "repro-table2": cmd_repro_table,
    "repro-table3": cmd_repro_table,
    "fig1-locus": cmd_fig1_locus,
}


# ---------------------------------------------------------------------------
# Rendering


def _flatten(prefix: str, obj, out: list):
    if isinstance(obj, dict):
        if "digits_claimed" in obj and ("value" in obj or "re" in obj):
            if "value" in obj:
                out.append((prefix, obj["value"], obj["digits_claimed"]))
            else:
                out.append((prefix + ".re", obj["re"], obj["digits_claimed"]))
                out.append((prefix + ".im", obj["im"], obj["digits_claimed"]))
            return
        for key, val in obj.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), val, out)
    elif isinstance(obj, list):
        for i, val in enumerate(obj):
            _flatten(f"{prefix}[{i}]", val, out)
    else:
        out.append((prefix, "" if obj is None else str(obj), ""))


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if doc["command"] == "fig1-locus":
        cols = ["theta", "re_c", "im_c", "arg_c", "region"]
        if fmt == "csv":
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            for r in doc["rows"]:
                w.writerow([r[c] for c in cols])
        else:
            buf.write("".join(f"{c:>24}" for c in cols) + "\n")
            for r in doc["rows"]:
                buf.write("".join(f"{r[c]:>24}" for c in cols) + "\n")
        return buf.getvalue()
    if doc["command"].startswith("repro-table"):
        cols = ["cell", "computed", "expected", "matched_digits", "printed_digits", "rule", "ok"]
        if fmt == "csv":
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            for r in doc["cells"]:
                w.writerow([r[c] for c in cols])
            return buf.getvalue()
        buf.write(f"table {doc['table']}: {'PASS' if doc['passed'] else 'FAIL'}\n")
        for r in doc["cells"]:
            mark = "ok  " if r["ok"] else "FAIL"
            buf.write(f"  {mark} {r['cell']:<28} {r['computed']:>26} {r['expected']:>24} "
                      f"{r['matched_digits']:>3}/{r['printed_digits']}\n")
        for n in doc["notes"]:
            buf.write(f"  note: {n}\n")
        for n in doc["warnings"]:
            buf.write(f"  warning: {n}\n")
        return buf.getvalue()
    flat = []
    _flatten("", doc, flat)
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "value", "digits_claimed"])
        w.writerows(flat)
        return buf.getvalue()
    width = max(len(k) for k, _, _ in flat)
    for key, val, dig in flat:
        suffix = f"  ({dig} digits)" if dig != "" else ""
        buf.write(f"{key:<{width}}  {val}{suffix}\n")
    return buf.getvalue()


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        doc, code = HANDLERS[cfg.command](cfg)
    except PrecisionBudgetExceeded as exc:
        print(f"mlstokes: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, MLStokesError, ValueError) as exc:
        print(f"mlstokes: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(doc, cfg.format)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
