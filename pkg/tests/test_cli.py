import json
import subprocess
import sys
from fractions import Fraction

import pytest

from sullivan import __version__
from sullivan.cli import jsonable, main, run


def report(*argv):
    status, rep, err, _ = run(list(argv) + ["--format", "json"])
    return status, rep, err


def test_json_shape(capsys):
    assert main(["coformalize", "E54", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["tool_version"] == __version__
    assert out["command"] == "coformalize"
    (v,) = out["verdicts"]
    assert v["kind"] == "CertifiedCoformal"
    assert v["substitutions"] == [{"generator": "y", "replacement": "y - x*a"}]


def test_fractions_are_strings():
    assert jsonable({"c": Fraction(-1, 2), "l": [Fraction(3)]}) == {"c": "-1/2", "l": ["3"]}
    status, rep, _ = report("lie-dual", "spheres", "S2")
    assert status == 0
    (v,) = rep["verdicts"]
    assert v["brackets"] == [{"left": "x", "right": "x", "value": {"y": "2"}}]


def test_text_output(capsys):
    assert main(["toomer", "spheres", "S2xS2xS9", "--max-degree", "14"]) == 0
    out = capsys.readouterr().out
    assert "value: 3" in out and "class: x*a*s" in out


@pytest.mark.parametrize("argv,kind", [
    (["validate", "E54", "E54"], "valid"),
    (["cohomology", "CP3"], "cohomology"),
    (["limit", "CP3"], "coformal_limit"),
    (["report", "E54"], "coformal"),
    (["report", "CP3"], "not-coformal"),
    (["iso-search", "CP3"], "NoIsoExists"),
    (["iso-search", "E54"], "IsoFound"),
    (["free-lie", "--gens", "a:2,b:2"], "free_lie"),
    (["fibration-analyze", "E54", "E54F"], "fibration"),
])
def test_commands(argv, kind):
    status, rep, err = report(*argv)
    assert status == 0, err
    assert rep["verdicts"][0]["kind"] == kind


def test_cohomology_dims():
    _, rep, _ = report("cohomology", "CP3", "--max-degree", "8")
    assert rep["cutoff"] == 8 and rep["verdicts"][0]["dims"] == [1, 0, 1, 0, 1, 0, 1, 0]


def test_free_lie_dims():
    _, rep, _ = report("free-lie", "--gens", "a:2,b:2", "--max-degree", "10")
    v = rep["verdicts"][0]
    assert v["dims"][1::2] == [2, 1, 2, 3, 6] and v["dims"] == v["pbw_dims"]


def test_fibration_analyze_cp3():
    _, rep, _ = report("fibration-analyze", "CP3-over-S4")
    v = rep["verdicts"][0]
    assert v["tnhz"] is False and "limit_fibration" not in v


def test_fibration_analyze_wedge():
    _, rep, _ = report("fibration-analyze", "wedge-S3S3-odd-fiber", "E02")
    v = rep["verdicts"][0]
    assert v["koszul"]["case"] == 1 and v["pipeline"]["coformalize"] == "CertifiedCoformal"


def test_invalid_input_exits_1():
    status, rep, _ = report("validate", "E53", "E53")
    assert status == 1 and rep["verdicts"][0]["kind"] == "invalid"
    status, rep, _ = report("coformalize", "E53")
    assert status == 1
    status, rep, _ = report("fibration-analyze", "E53", "E53F")
    assert status == 1 and rep["verdicts"][0]["kind"] == "invalid"


def test_dsl_error_exits_1(tmp_path):
    f = tmp_path / "bad.sul"
    f.write_text("algebra A\n  gen x 2\n  d x = q\n")
    status, rep, err = report("validate", str(f))
    assert status == 1 and rep is None and "line 3" in err


def test_usage_errors_exit_2(capsys):
    assert report("cohomology", "no-such-fixture")[0] == 2
    assert report("cohomology", "CP3", "Nope")[0] == 2
    assert report("cohomology", "CP3", "--max-degree", "0")[0] == 2
    assert report("free-lie", "--gens", "a2")[0] == 2
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "sullivan.cli", "toomer", "S2-fiber-gap", "GAP", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["verdicts"][0]["value"] == 2
