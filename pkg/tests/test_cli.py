import json
import subprocess
import sys

import numpy as np
import pytest

from wilson_racah import cli, racah
from wilson_racah.racah import FIG2_PARAMS


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return header, rows


def test_eval_wilson_degree_zero(capsys):
    code, out, _ = run(["eval", "--family", "wilson", "--n", "0", "--y2", "1",
                        "--params", "0.7,0.2,0.5,0.3"], capsys)
    assert code == 0
    cols, rows = read_csv(out)
    assert cols == ["n", "value"]
    assert rows[-1, 1] == 1.0


def test_eval_wilson_degree_one(capsys):
    code, out, _ = run(["eval", "--family", "wilson", "--n", "1", "--y2", "1",
                        "--params", "0.7,0.2,0.5,0.3"], capsys)
    assert code == 0
    assert read_csv(out)[1][-1, 1] == pytest.approx(-2.0180555555555557, rel=1e-15)
    assert "# mu=0.7" in out


def test_eval_racah_bit_exact(capsys):
    code, out, _ = run(["eval", "--family", "racah", "--n", "2", "--m", "1",
                        "--racah-params", "0.7,10.3,0.5", "--N", "10", "--format", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["header"]["delta"] == FIG2_PARAMS.delta
    assert payload["rows"][-1][1] == racah.racah_series(2, 1, FIG2_PARAMS, "tilde")


def test_eval_racah_normalized_has_imaginary_column(capsys):
    code, out, _ = run(["eval", "--family", "racah", "--n", "3", "--m", "2", "--normalized"], capsys)
    assert code == 0
    cols, rows = read_csv(out)
    assert cols == ["n", "value", "value_imag"]
    ref = racah.racah_normalize(FIG2_PARAMS).values[:4, 2]
    assert np.allclose(rows[:, 1] + 1j * rows[:, 2], ref, rtol=1e-15)


def test_eval_wilson_normalized_recursion(capsys):
    code, out, _ = run(["eval", "--family", "wilson", "--n", "4", "--y2", "0.5", "--normalized",
                        "--method", "recursion"], capsys)
    assert code == 0
    from wilson_racah import wilson

    ref = wilson.orthonormal_table(4, 0.5, wilson.FIG1_PARAMS)
    assert np.allclose(read_csv(out)[1][:, 1], ref, rtol=1e-15)


@pytest.mark.parametrize("argv, fragment", [
    (["eval", "--family", "wilson", "--n", "1", "--y2", "1", "--params", "0.7,-0.2,0.5,0.3"], "nu > 0"),
    (["eval", "--family", "racah", "--n", "1", "--m", "1", "--racah-params", "0.7,5,0.5", "--N", "10"],
     "beta > N - 1"),
    (["eval", "--family", "racah", "--n", "1", "--m", "1", "--racah-params=-1.5,10.3,0.5", "--N", "10"],
     "alpha > -1"),
    (["eval", "--family", "wilson", "--n", "1", "--y2", "1", "--params", "0.7,0.2"], "--params"),
    (["eval", "--family", "wilson", "--n", "1"], "--y2"),
    (["figure", "--id", "2", "--grid", "1:2"], "lo:hi:count"),
    (["figure", "--id", "1", "--grid", "0:5:10"], "y > 0"),
    (["check", "--relation", "a4", "--params=-0.5,1.2,1.0,0.8"], "mu >= 0"),
])
def test_exit_two_names_constraint(argv, fragment, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert fragment in err


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["eval", "--family", "legendre", "--n", "1"])
    assert exc.value.code == 2


@pytest.mark.parametrize("relation", ["a13", "a17", "a18"])
def test_check_racah_relations(relation, capsys):
    code, out, _ = run(["check", "--relation", relation, "--tol", "1e-9"], capsys)
    report = json.loads(out)
    assert code == 0 and report["pass"]
    assert report["relation"] == relation
    assert report["residual"] < 1e-9


def test_check_a17_residual(capsys):
    code, out, _ = run(["check", "--relation", "a17"], capsys)
    assert code == 0
    assert json.loads(out)["residual"] < 1e-10


def test_check_a4(capsys):
    code, out, _ = run(["check", "--relation", "a4", "--nmax", "8", "--tol", "1e-6"], capsys)
    assert code == 0 and json.loads(out)["pass"]


def test_check_eq7(capsys):
    code, out, _ = run(["check", "--relation", "eq7", "--nmax", "4", "--tol", "1e-6"], capsys)
    assert code == 0 and json.loads(out)["residual"] < 1e-6


def test_check_single_point(capsys):
    code, out, _ = run(["check", "--relation", "a13", "--racah-params", "0.7,0.3,0.5", "--N", "0"], capsys)
    report = json.loads(out)
    assert code == 0 and report["residual"] < 1e-15


def test_check_failure_exit_one(capsys):
    code, out, _ = run(["check", "--relation", "a17", "--tol", "1e-30"], capsys)
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_wr_tol_environment(monkeypatch, capsys):
    monkeypatch.setenv("WR_TOL", "1e-30")
    code, out, _ = run(["check", "--relation", "a17"], capsys)
    assert code == 1 and json.loads(out)["tolerance"] == 1e-30
    monkeypatch.setenv("WR_TOL", "abc")
    code, _, err = run(["check", "--relation", "a17"], capsys)
    assert code == 2 and "WR_TOL" in err


def test_figure_one(tmp_path, capsys):
    path = tmp_path / "fig1.csv"
    assert run(["figure", "--id", "1", "--output", str(path)], capsys)[0] == 0
    text = path.read_text()
    assert "# mu=0.7" in text and "# b=0.3" in text
    cols, rows = read_csv(text)
    assert cols == ["y", "delta_over_pi", "delta_principal_over_pi"]
    assert rows[0, 0] > 0 and rows[-1, 0] == 5.0
    assert np.all(np.isfinite(rows))
    assert np.max(np.abs(np.diff(rows[:, 1]))) < 0.05


def test_figure_two_and_three(tmp_path, capsys):
    for fig in (2, 3):
        path = tmp_path / f"fig{fig}.json"
        assert run(["figure", "--id", str(fig), "--format", "json", "-o", str(path)], capsys)[0] == 0
        payload = json.loads(path.read_text())
        assert payload["header"]["N"] == 10 and payload["header"]["alpha"] == 0.7
        assert payload["columns"][1:5] == ["psi0", "psi1", "psi2", "psi3"]
        rows = np.array(payload["rows"])
        assert np.all(np.isfinite(rows))
    assert payload["header"]["ell"] == 1
    assert np.all(rows[0, 1:] == 0.0)


def test_console_script_deterministic(tmp_path):
    outputs = []
    for k in range(2):
        path = tmp_path / f"run{k}.csv"
        subprocess.run([sys.executable, "-m", "wilson_racah.cli", "figure", "--id", "2", "-o", str(path)],
                       check=True)
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
