import io
import json
import subprocess
import sys

import pytest

from fqpolylog import FieldTower, RatFunc, kpl_eval, continue_kpl
from fqpolylog.cli import main
from fqpolylog.textio import format_series

F3 = FieldTower.for_q(3)


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def records(*argv):
    code, text = run(*argv, "--output", "records")
    assert code == 0
    return [json.loads(line) for line in text.splitlines()]


def test_eval_kpl_matches_library_bytes():
    rec, = records("eval-kpl", "--q", "3", "--n", "1", "--u", "1", "--prec", "20")
    assert rec["value"] == format_series(kpl_eval(1, RatFunc.from_int(F3, 1), 20))
    assert rec["floor"] == "-20" and rec["status"] == "ok"


def test_continue_kpl_reports_extension():
    rec, = records("continue-kpl", "--q", "3", "--n", "2", "--u", "th^2", "--prec", "20")
    assert rec["extension"] == "F_27"
    assert rec["ell"] == 1 and rec["g"] == "2*t+2*th"
    th = RatFunc.theta(F3)
    assert rec["value"] == format_series(continue_kpl(2, th * th, 20))


def test_route_both_reports_agreement():
    rec, = records("continue-kpl", "--n", "1", "--u", "th^2", "--prec", "20", "--route", "both")
    assert rec["agreement_residual"] == "-inf" or float(rec["agreement_residual"]) <= -20


def test_out_of_disc_is_a_record_not_a_crash():
    code, text = run("eval-kpl", "--n", "1", "--u", "th", "--u", "1")
    assert code == 0
    lines = text.splitlines()
    assert "status=error" in lines[0] and "DomainError" in lines[0]
    assert "status=ok" in lines[1]


@pytest.mark.parametrize("argv,code", [
    (["eval-kpl", "--q", "6", "--n", "1", "--u", "1"], 1),
    (["eval-kpl", "--n", "1", "--u", "th +"], 1),
    (["eval-kpl", "--u", "1"], 1),
    (["eval-kpl", "--q", "4782969", "--n", "1", "--u", "1"], 2),
    (["relations", "--verify", "/nonexistent/file"], 1),
])
def test_exit_codes(argv, code, capsys):
    assert run(*argv)[0] == code
    assert capsys.readouterr().err


def test_relations_and_verify(tmp_path):
    indep, = records("relations", "--n", "2", "--u-list", "1,th", "--deg-bound", "6")
    assert indep["kind"] == "independent"
    rel, = records("relations", "--n", "1", "--u-list", "1,2", "--lift", "--prec", "30")
    assert rel["passes"] and rel["coefficients"] == ["1", "1"]
    path = tmp_path / "certs.jsonl"
    path.write_text(json.dumps(rel) + "\n")
    ver, = records("relations", "--verify", str(path))
    assert ver["passes"]


def test_kmpl_verbs():
    rec, = records("eval-kmpl", "--s", "1,1", "--u", "1,1", "--prec", "20")
    assert rec["floor"] == "-20"
    rec, = records("continue-kmpl", "--s", "1,1", "--u", "1,1", "--prec", "20")
    assert len(rec["vector"]) == 2 and len(rec["monodromy"]) == 2


def test_delta_and_wp_solve():
    rec, = records("delta-check", "--n", "2", "--u", "th", "--route", "ext", "--prec", "20")
    assert rec["passes"]
    rec, = records("wp-solve", "--c", "th^(-1/1)+1", "--prec", "10")
    assert rec["field_growth"] == {"m": [1, 3]}
    assert rec["residual_exponent"] == rec["floor"]


def test_input_file(tmp_path):
    path = tmp_path / "us.txt"
    path.write_text("1\n2\n\nth^-1\n")
    out = records("eval-kpl", "--n", "1", "--input", str(path), "--prec", "10")
    assert [r["u"] for r in out] == ["1", "2", "1/th"]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "fqpolylog.cli", "eval-kpl", "--n", "1", "--u", "1", "--prec", "8"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("verb=eval-kpl")
