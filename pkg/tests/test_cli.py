import json
import math
import subprocess
import sys

import pytest

from essmin import cli, report
from essmin.lower import LowerBoundResult, LowerMethod
from essmin.report import (
    Config,
    UsageError,
    analyze,
    report_from_json,
    report_to_json,
    report_to_text,
    reproduce,
)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bounds_text(capsys):
    code, out, _ = run(["bounds", "--a", "-1", "--b", "1"], capsys)
    assert code == 0
    assert "series_center" in out and "consistent" in out
    assert "Doche" in out and "external context" in out


def test_bounds_json_fields(capsys):
    code, out, _ = run(["bounds", "--a", "1", "--b", "2", "--format", "json"], capsys)
    assert code == 0
    d = json.loads(out)
    assert float(d["lower"]["value"]) == pytest.approx(math.log(math.sqrt(3)), abs=1e-9)
    assert float(d["upper"]["bound"]) <= 0.6461598436469
    assert isinstance(d["upper"]["value"]["value"], str)
    assert d["config"]["grid_size"] == 4096


def test_b_zero_pins_report():
    r = analyze("2", "0")
    assert r.lower.value == pytest.approx(math.log(2), abs=1e-12)
    assert r.upper.value.value == pytest.approx(math.log(2), abs=1e-12)


@pytest.mark.parametrize("a, b", [("-1", "1"), ("1", "2"), ("7/15", "250/36"), ("i", "2i"), ("3", "1/2")])
def test_json_round_trip(a, b):
    r = analyze(a, b)
    assert report_from_json(report_to_json(r)) == r


def test_json_is_byte_deterministic():
    one = report_to_json(analyze("2", "3", t=0.25))
    two = report_to_json(analyze("2", "3", t=0.25))
    assert one == two


def test_delta_example_flag():
    r = analyze("7/15", "250/36")
    assert any("log 90" in n for n in r.notes)


def test_gaussian_report(capsys):
    code, out, _ = run(["bounds", "--a", "i", "--b", "2i"], capsys)
    assert code == 0
    assert "numeric (not certified)" in out
    r = analyze("i", "2i")
    assert r.upper.value.value == pytest.approx(math.log(2), abs=1e-10)
    assert r.density is None


def test_omega_at_t(capsys):
    code, out, _ = run(["bounds", "--a", "1", "--b", "1", "--t=-1/2", "--format", "json"], capsys)
    d = json.loads(out)
    assert float(d["omega_at_t"]["value"]) == pytest.approx(0.3194342924687605, abs=1e-12)


@pytest.mark.parametrize(
    "argv, token",
    [
        (["bounds", "--a", "foo", "--b", "1"], "foo"),
        (["bounds", "--a", "0", "--b", "1"], "0"),
        (["reproduce", "--table", "nope"], "nope"),
        (["density", "--a", "1/2", "--b", "0", "--radii", "1,1"], "1,1"),
        (["density", "--a", "i", "--b", "1"], "i"),
    ],
)
def test_usage_errors_exit_2(argv, token, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert repr(token)[1:-1] in err and "hint:" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bounds", "--a", "1"])
    assert exc.value.code == 2


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("ESSMIN_TOL", "1e-10")
    assert Config.from_env().tol == 1e-10
    assert Config.from_env(tol=1e-11).tol == 1e-11
    monkeypatch.setenv("ESSMIN_TOL", "loose")
    with pytest.raises(UsageError):
        Config.from_env()


def test_env_tolerance_bad_exits_2(monkeypatch, capsys):
    monkeypatch.setenv("ESSMIN_TOL", "-3")
    code, _, err = run(["bounds", "--a", "1", "--b", "1"], capsys)
    assert code == 2


def test_inconsistency_exits_1(monkeypatch, capsys):
    monkeypatch.setattr(report, "best_lower",
                        lambda a, b, g: LowerBoundResult(5.0, LowerMethod.PROP34, None))
    code, out, _ = run(["bounds", "--a", "1", "--b", "1"], capsys)
    assert code == 1
    assert "INCONSISTENT" in out


def test_density_command(capsys):
    code, out, _ = run(["density", "--a", "1", "--b", "1", "--format", "json"], capsys)
    assert code == 0
    d = json.loads(out)
    assert float(d["threshold"]["value"]) <= 0.31944909
    code, out, _ = run(["density", "--a", "1/2", "--b", "0", "--x", "0", "--radii", "1"], capsys)
    assert code == 0 and "0.693147180559945" in out


@pytest.mark.parametrize("table", ["thm2.9", "thmA", "cor3.9", "thm4.3-examples"])
def test_reproduce_tables_pass(table, capsys):
    rows = reproduce(table)
    assert rows and all(r.passed for r in rows)
    code, out, _ = run(["reproduce", "--table", table], capsys)
    assert code == 0 and "overall: PASS" in out


def test_text_report_shape():
    text = report_to_text(analyze("1", "3"))
    assert text.splitlines()[0].startswith("essmin ")
    assert "status: consistent" in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "essmin.cli", "reproduce", "--table", "bogus"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
