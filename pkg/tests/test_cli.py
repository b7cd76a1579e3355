from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from elprior.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, main
from elprior.poly import Poly2


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _row(out: str, key: str) -> str:
    for line in out.splitlines():
        if line.split() and line.split()[0] == key:
            return line[len(key):].strip()
    raise KeyError(key)


def test_families_list(capsys):
    code, out, _ = run(capsys, "families", "list")
    assert code == EXIT_OK
    for name in ("el", "schennach", "fm-matching", "geef:mu=<r>"):
        assert name in out


def test_families_show_el(capsys):
    code, out, _ = run(capsys, "families", "show", "el")
    assert code == EXIT_OK
    assert _row(out, "a3") == "1/3*s"
    assert _row(out, "b6") == "1/18*s^2"


def test_families_show_geef(capsys):
    _, out, _ = run(capsys, "families", "show", "geef:mu=1/8")
    assert Poly2.parse(_row(out, "b4")) == Poly2.parse("1/8*k - 3/8*s^2 - 3/8")


def test_families_show_bogus(capsys):
    code, _, err = run(capsys, "families", "show", "bogus")
    assert code == EXIT_USAGE
    assert "position" in err


def test_family_json_round_trip(capsys, tmp_path):
    path = tmp_path / "fam.json"
    run(capsys, "families", "show", "cressie-read:tau3=1/2,tau4=2/7", "--json", str(path))
    _, direct, _ = run(capsys, "families", "show", "cressie-read:tau3=1/2,tau4=2/7")
    _, loaded, _ = run(capsys, "families", "show", f"file:{path}")
    assert direct.splitlines()[1:] == loaded.splitlines()[1:]


def test_match_check_feasible(capsys):
    code, out, _ = run(capsys, "match", "check", "--family", "el", "--order", "one", "--prior-class", "elaborate")
    assert code == EXIT_OK
    assert "derived lambda = 5/4*s^2 - 2/3*k + 2" in out


def test_match_check_infeasible_names_condition(capsys):
    code, out, _ = run(capsys, "match", "check", "--family", "geef:mu=1/8", "--order", "one", "--prior-class", "elaborate")
    assert code == EXIT_INFEASIBLE
    assert "fails b4 condition; residual: 1/8*s^2 - 1/8*k + 1/8" in out


def test_match_derive(capsys):
    code, out, _ = run(capsys, "match", "derive", "--family", "fm-matching", "--prior-class", "elaborate")
    assert code == EXIT_OK
    assert "derived chi    = 0" in out and "derived lambda = 0" in out


@pytest.fixture
def data_file(tmp_path):
    path = tmp_path / "sample.csv"
    path.write_text("x\n0.3\n1.9\n0.7\n2.8\n0.1\n1.2\n0.4\n")
    return path


def test_quantile(capsys, data_file, tmp_path):
    out_json = tmp_path / "q.json"
    code, out, err = run(capsys, "quantile", "--family", "el", "--prior", "eq29", "--alpha", "0.05", "--order", "1", "--data", str(data_file), "--json", str(out_json))
    assert code == EXIT_OK and err == ""
    doc = json.loads(out_json.read_text())
    assert doc["result"]["quantile"] == doc["result"]["theta1"]
    assert doc["config"]["prior"] == "eq29" and "generator" in doc
    assert _row(out, "order") == "first"


def test_quantile_notice_for_growing_prior(capsys, data_file):
    code, _, err = run(capsys, "quantile", "--prior", "eq34", "--data", str(data_file))
    assert code == EXIT_OK
    # g4 of this sample is small, so lambda(g3, g4) > 0
    assert "notice" in err


def test_prior_json_round_trip(capsys, data_file, tmp_path):
    path = tmp_path / "q.json"
    run(capsys, "quantile", "--prior", "elaborate:chi=-1/2*s,lambda=s^2-1", "--order", "2", "--data", str(data_file), "--json", str(path))
    _, a, _ = run(capsys, "quantile", "--prior", "elaborate:chi=-1/2*s,lambda=s^2-1", "--order", "2", "--data", str(data_file), "--full-precision")
    _, b, _ = run(capsys, "quantile", "--prior", f"file:{path}", "--order", "2", "--data", str(data_file), "--full-precision")
    assert a == b


def test_precision_flag(capsys, data_file):
    _, short, _ = run(capsys, "quantile", "--data", str(data_file))
    _, full, _ = run(capsys, "quantile", "--data", str(data_file), "--full-precision")
    assert len(_row(short, "theta1").replace("-", "").replace(".", "")) <= 6
    assert len(_row(full, "theta1")) > len(_row(short, "theta1"))


def test_coverage_simulate_anchor(capsys, tmp_path):
    js, cs = tmp_path / "c.json", tmp_path / "c.csv"
    code, out, _ = run(
        capsys, "coverage", "simulate", "--dist", "exp", "--n", "8", "--alpha", "0.05", "--reps", "10000",
        "--seed", "42", "--family", "geef:mu=1/8", "--prior", "eq29", "--order", "1", "--json", str(js), "--csv", str(cs),
    )
    assert code == EXIT_OK
    assert abs(float(_row(out, "coverage")) - 0.850) <= 0.015
    doc = json.loads(js.read_text())
    assert doc["config"]["seed"] == 42 and doc["generator"] == doc["result"]["generator"]
    row = next(csv.DictReader(cs.open()))
    assert row["seed"] == "42" and row["hits"] == str(doc["result"]["hits"])


def test_config_round_trip_and_precedence(capsys, tmp_path):
    js = tmp_path / "c.json"
    run(capsys, "coverage", "simulate", "--dist", "uniform", "--n", "12", "--reps", "3000", "--seed", "7", "--order", "2", "--json", str(js))
    js2 = tmp_path / "c2.json"
    run(capsys, "coverage", "simulate", "--config", str(js), "--json", str(js2))
    assert json.loads(js.read_text())["result"] == json.loads(js2.read_text())["result"]

    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ndist = uniform\nn = 12\nreps = 3000\nseed = 7\norder = 2\n")
    _, from_file, _ = run(capsys, "coverage", "simulate", "--config", str(cfg))
    _, from_flags, _ = run(capsys, "coverage", "simulate", "--dist", "uniform", "--n", "12", "--reps", "3000", "--seed", "7", "--order", "2")
    assert from_file == from_flags
    _, overridden, _ = run(capsys, "coverage", "simulate", "--config", str(cfg), "--n", "16")
    assert _row(overridden, "n") == "16"


def test_bad_config_line(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("dist uniform\n")
    code, _, err = run(capsys, "coverage", "simulate", "--config", str(cfg))
    assert code == EXIT_USAGE and "line 1" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["coverage", "simulate", "--n", "8"],
        ["coverage", "simulate", "--dist", "cauchy", "--n", "8"],
        ["coverage", "simulate", "--dist", "normal", "--n", "8", "--alpha", "1.5"],
        ["coverage", "simulate", "--dist", "normal", "--n", "2"],
        ["coverage", "predict", "--n", "50"],
        ["coverage", "predict", "--n", "50", "--dist", "normal", "--prior", "eq34"],
        ["coverage", "predict", "--n", "50", "--moments", "0,1,2"],
        ["quantile", "--data", "/nonexistent/file.csv"],
        ["match", "check", "--order", "one"],
        ["nonsense"],
    ],
)
def test_validation_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_coverage_predict(capsys, tmp_path):
    js = tmp_path / "p.json"
    code, out, _ = run(capsys, "coverage", "predict", "--dist", "exponential", "--n", "50", "--json", str(js))
    assert code == EXIT_OK
    assert float(_row(out, "predicted_coverage")) == pytest.approx(0.948304, abs=1e-6)
    _, by_moments, _ = run(capsys, "coverage", "predict", "--moments", "1,1,2,9", "--n", "50")
    assert by_moments == out
    assert json.loads(js.read_text())["result"]["k4"] == 42.0


def test_table2_small(capsys, tmp_path):
    cs = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table2", "--reps", "100", "--seed", "5", "--csv", str(cs))
    assert code == EXIT_OK
    assert "Rayleigh(1)" in out and "seed=5" in out
    rows = list(csv.DictReader(cs.open()))
    assert len(rows) == 80 and rows[0]["master_seed"] == "5"


def test_cumulants_validate(capsys, tmp_path):
    js = tmp_path / "k.json"
    code, out, _ = run(capsys, "cumulants", "validate", "--dist", "uniform", "--n", "30", "--reps", "5000", "--seed", "3", "--json", str(js))
    assert code == EXIT_OK
    assert [line.split()[0] for line in out.splitlines()[2:]] == ["k1", "k2", "k3", "k4"]
    assert len(json.loads(js.read_text())["result"]["estimates"]) == 4


def test_outputs_are_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        run(capsys, "coverage", "simulate", "--dist", "beta12", "--n", "10", "--reps", "500", "--workers", "2", "--json", str(path))
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "elprior", "families", "show", "el"], capture_output=True, text=True)
    assert proc.returncode == 0 and "1/18*s^2" in proc.stdout
