import json
import subprocess
import sys
from fractions import Fraction

import pytest

from gkm14 import cli
from gkm14.series import PuiseuxSeries


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def gkm14(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "gkm14.cli", *argv],
                          capture_output=True, text=True, env=env)


def test_series_f1_text(capsys):
    code, out, _ = run(capsys, "series", "--which", "f1", "--order", "4", "--format", "text")
    assert code == 0
    assert out == "q^{-1} + 12 + 300q + 5792q^2 + 84186q^3\n"


def test_series_chi_text(capsys):
    code, out, _ = run(capsys, "--format", "text", "series", "--which", "chi", "--order", "2")
    assert code == 0
    assert out == "q^{-1} + 300 + 196884q\n"


def test_series_fractional_exponents(capsys):
    _, out, _ = run(capsys, "series", "--which", "f7", "--order", "3", "--format", "text")
    assert out == "q^{-1/4} + 90q^{3/4} + 2535q^{7/4} + 42614q^{11/4}\n"


def test_series_g5_reports_printed_mismatch(capsys):
    code, out, _ = run(capsys, "series", "--which", "g5", "--order", "6", "--no-timings")
    rep = json.loads(out)
    assert code == 1
    assert rep["checks"] == {"matches_printed_coefficients": False}
    assert rep["data"]["mismatches"][0] == ["2", "384", "768"]


def test_format_series_signs():
    s = PuiseuxSeries.from_exponents({-1: 1, 0: -3, Fraction(1, 2): -1, 2: 5})
    assert cli.format_series(s) == "q^{-1} - 3 - q^{1/2} + 5q^2"
    assert cli.format_series(PuiseuxSeries.zero()) == "0"
    assert cli.format_series(PuiseuxSeries.monomial(-2, 1)) == "-2q"


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "discriminant", "--lattice", "N")
    rep = json.loads(out)
    assert code == 0 and rep["pass"]
    assert len(rep["data"]["table"]["rows"]) == 16
    assert [r["orbit_size"] for r in rep["data"]["table"]["rows"]][:4] == [1, 1, 2, 990]
    assert "timings" in rep


def test_tables_csv(capsys):
    code, out, _ = run(capsys, "tables", "discriminant", "--lattice", "K", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "No.,representative,lift orbit size,norm,orbit size,q,order"
    assert len(out.splitlines()) == 8


def test_assignment_validate(capsys):
    code, out, _ = run(capsys, "assignment", "--validate", "--no-timings")
    rep = json.loads(out)
    assert code == 0
    assert rep["data"]["assignment"]["7"] == 5
    assert all(rep["checks"].values()) and len(rep["checks"]) == 3


def test_weil_and_lift(capsys):
    code, out, _ = run(capsys, "weil-check", "--tol", "1e-6", "--order", "20")
    assert code == 0 and json.loads(out)["data"]["order"] == "20"
    code, out, _ = run(capsys, "lift-check", "--order", "5", "--tol", "1e-8", "--exact")
    assert code == 0 and json.loads(out)["data"]["mode"] == "exact"


def test_roots_and_weyl_vector(capsys):
    code, out, _ = run(capsys, "roots", "--kind", "simple", "--height", "1/4")
    rep = json.loads(out)
    assert code == 0 and rep["data"]["n_roots"] == 1
    code, out, _ = run(capsys, "weyl-vector", "--cap", "1/2", "--no-timings")
    rep = json.loads(out)
    assert code == 0 and rep["data"]["n_simple_roots"] == 265


def test_denominator_small_height_fails_size_requirement(capsys):
    code, out, _ = run(capsys, "denominator-check", "--height", "1/4")
    rep = json.loads(out)
    # the identity holds, but too few exponents are compared for a pass
    assert rep["data"]["pass"] is True
    assert rep["data"]["n_exponents_compared"] < 100
    assert code == 1


def test_deterministic_payload(capsys):
    argv = ("weyl-vector", "--no-timings")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


@pytest.mark.parametrize("argv,msg", [
    (["series", "--which", "f9"], "--which"),
    (["--series-order", "3", "assignment"], "series_order"),
    (["tables", "discriminant", "--lattice", "Q"], "invalid choice"),
    (["frobnicate"], "invalid choice"),
    (["weil-check", "--tol", "-1"], "positive"),
    ([], "required"),
])
def test_usage_errors(capsys, argv, msg):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    payload = json.loads(err)
    assert payload["error"] == "usage" and payload["exit_code"] == 2
    assert msg in payload["message"]


def test_internal_error_exit_code(capsys, monkeypatch):
    def boom(args, cfg):
        raise ArithmeticError("exploded")
    monkeypatch.setattr(cli, "cmd_weyl", boom)
    code, _, err = run(capsys, "weyl-vector")
    assert code == 3 and json.loads(err)["message"] == "exploded"


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nseries_order = 25\ntol = 1e-7\noutput_format = text\n")
    code, out, _ = run(capsys, "--config", str(cfg), "assignment")
    assert code == 0 and out.startswith("orbit 1 -> f1")
    code, out, _ = run(capsys, "--config", str(cfg), "--format", "json", "weil-check")
    assert json.loads(out)["data"]["order"] == "25"


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(capsys, "--config", str(cfg), "assignment")
    assert code == 2 and "expected one of" in json.loads(err)["message"]


def test_run_config_invariants():
    with pytest.raises(cli.UsageError):
        cli.RunConfig(series_order=5)
    with pytest.raises(cli.UsageError):
        cli.RunConfig(tol=0)
    assert cli.RunConfig().series_order == 30


def test_cache_commands(tmp_path, capsys):
    code, out, _ = run(capsys, "--cache-dir", str(tmp_path), "tables", "discriminant", "--lattice", "K")
    assert code == 0
    code, out, _ = run(capsys, "--cache-dir", str(tmp_path), "cache", "list")
    assert code == 0 and json.loads(out)["data"]["directory"] == str(tmp_path)
    code, out, _ = run(capsys, "--cache-dir", str(tmp_path), "cache", "clear")
    assert code == 0 and isinstance(json.loads(out)["data"]["removed"], int)


def test_cache_needs_directory(capsys):
    code, _, err = run(capsys, "cache", "list")
    assert code == 2


def test_console_entry_point():
    p = gkm14("series", "--which", "f2", "--order", "2", "--format", "text")
    assert p.returncode == 0 and p.stdout == "12 + 288q\n"
