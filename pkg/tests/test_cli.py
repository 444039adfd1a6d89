import csv
import io
import json
import subprocess
import sys

import pytest

from mlstokes.cli import main, parse_config


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_eval_table3_row(capsys):
    code, out = run(["eval", "--a", "0.95", "--x", "20", "--kmax", "5"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) >= {"command", "inputs", "truncation", "results", "digits_claimed"}
    res = doc["results"]
    assert set(res) >= {"oracle", "partial_sum", "script_E", "R_M", "terms", "est_error", "rel_dev"}
    assert res["script_E"]["value"].startswith("-2.521343284521")
    assert float(res["rel_dev"]["value"]) < 1e-12
    assert doc["truncation"]["M"] == 25


def test_every_number_claims_digits(capsys):
    _, out = run(["eval", "--a", "0.9", "--x", "10", "--kmax", "3"], capsys)
    doc = json.loads(out)

    def walk(node):
        if isinstance(node, dict):
            if "value" in node or "re" in node:
                assert isinstance(node["digits_claimed"], int)
            for v in node.values():
                walk(v)
        elif isinstance(node, list):
            for v in node:
                walk(v)
        elif isinstance(node, float):
            raise AssertionError("bare float in report")

    walk(doc)


def test_eval_a_one(capsys):
    _, out = run(["eval", "--a", "1", "--x", "5"], capsys)
    res = json.loads(out)["results"]
    assert float(res["partial_sum"]["value"]) == 0
    assert res["oracle"]["value"].startswith("6.73794699908546709663604842315")


def test_eval_table2(capsys):
    _, out = run(["eval", "--a", "0.99", "--x", "40", "--kmax", "6"], capsys)
    r = json.loads(out)["results"]["R_M"]["value"]
    assert r.startswith("1.5691332232656")


def test_deterministic(capsys):
    argv = ["eval", "--a", "0.8", "--x", "20", "--kmax", "5", "--format", "csv"]
    _, first = run(argv, capsys)
    _, second = run(argv, capsys)
    assert first == second
    rows = list(csv.reader(io.StringIO(first)))
    assert rows[0] == ["quantity", "value", "digits_claimed"]


def test_text_format(capsys):
    code, out = run(["eval", "--a", "0.8", "--x", "20", "--format", "text"], capsys)
    assert code == 0 and "results.script_E" in out


@pytest.mark.parametrize("argv", [
    ["eval", "--a", "1.5", "--x", "3"],
    ["eval", "--a", "0.5", "--x", "3", "--digits", "8"],
    ["eval", "--a", "0.5", "--x", "3", "--kmax", "-1"],
    ["eval", "--a", "0.5"],
    ["eval", "--a", "zero", "--x", "1"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_budget_exit(capsys):
    assert main(["eval", "--a", "0.3", "--x", "40"]) == 3


def test_fig1_locus(capsys, tmp_path):
    out = tmp_path / "locus.csv"
    assert main(["fig1-locus", "--a", "0.8", "--samples", "40", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["theta", "re_c", "im_c", "arg_c", "region"]
    pole = [r for r in rows if r["region"] == "pole"]
    assert len(pole) == 1 and pole[0]["arg_c"] == "" and float(pole[0]["re_c"]) == 0
    last = rows[-1]
    assert abs(complex(float(last["re_c"]), float(last["im_c"])) - 3.5449077018 * (1 + 1j) / 2**0.5) < 1e-9
    assert float(last["arg_c"]) == pytest.approx(0.7853981634)


def test_compare_with_theta(capsys):
    code, out = run(["compare", "--a", "0.9", "--x", "20", "--kmax", "6", "--theta", "19/20"], capsys)
    assert code == 0
    th = json.loads(out)["results"]["theta"]
    assert float(th["rel_dev"]["value"]) < 1e-9


def test_repro_table1_exit_code(capsys):
    code, out = run(["repro-table1"], capsys)
    doc = json.loads(out)
    bad = [c["cell"] for c in doc["cells"] if not c["ok"]]
    assert bad == ["B4.re"]
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mlstokes", "fig1-locus", "--a", "0.5", "--samples", "3"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0] == "theta,re_c,im_c,arg_c,region"


def test_parse_config_defaults():
    cfg = parse_config(["fig1-locus", "--a", "0.5"])
    assert cfg.format == "csv" and cfg.samples == 400
    cfg = parse_config(["eval", "--a", "0.5", "--x", "2"])
    assert cfg.format == "json" and cfg.kmax == 6 and cfg.digits == 30
