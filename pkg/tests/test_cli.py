import json

import numpy as np
import pytest

from canonlap.cli import dumps, main
from canonlap.hilbert import first_eigenfunctions


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def write_samples(path, fin, fout, n=401):
    xs = np.linspace(0.0, 1.0, n)
    lines = ["branch,x,value"]
    lines += [f"inner,{x!r},{v!r}" for x, v in zip(xs.tolist(), np.asarray(fin(xs), float).tolist())]
    lines += [f"outer,{x!r},{v!r}" for x, v in zip(xs.tolist(), np.asarray(fout(np.maximum(xs, 1e-12)), float).tolist())]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_zeros_json(capsys):
    status, out, _ = run(capsys, "zeros", "--m", "1", "--nu", "2", "--cutoff", "12")
    assert status == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and doc["m"] == 1
    zs = doc["sets"][0]["zeros"]
    assert len(zs) >= 2 and all(0 < z <= 12 for z in zs)
    assert zs == sorted(zs)


def test_zeros_csv_and_range(capsys):
    status, out, _ = run(capsys, "zeros", "--m", "1", "--nu=-2:3", "--cutoff", "10", "--format", "csv")
    assert status == 0
    rows = out.strip().splitlines()
    assert rows[0] == "m,nu,k,lambda"
    by_nu = {}
    for r in rows[1:]:
        m, nu, k, lam = r.split(",")
        by_nu.setdefault(int(nu), []).append(float(lam))
    # L_{m,nu} and L_{m,m-nu} share zeros
    assert by_nu[-2] == by_nu[3]


@pytest.mark.parametrize("argv", [
    ["zeros", "--nu", "1", "--cutoff", "-1"],
    ["zeros", "--nu", "1", "--cutoff", "nan"],
    ["zeros", "--nu", "a:b", "--cutoff", "5"],
    ["zeros", "--m", "-1", "--nu", "1", "--cutoff", "5"],
    ["spectrum", "--cutoff", "0"],
    ["verify", "--suite", "nosuch"],
    ["frobnicate"],
])
def test_bad_flags_exit_2(capsys, argv):
    status, _, err = run(capsys, *argv)
    assert status == 2 and "error" in err


def test_spectrum_m0(capsys):
    status, out, _ = run(capsys, "spectrum", "--m", "0", "--cutoff", "4")
    assert status == 0
    lines = json.loads(out)["lines"]
    assert lines[0]["eigenvalue"] == 0.0 and lines[0]["multiplicity"] == 1
    assert lines[1]["eigenvalue"] == pytest.approx(1.8411837813406593**2 / 4, rel=1e-10)
    assert lines[1]["multiplicity"] == 2


def test_spectrum_csv(capsys):
    status, out, _ = run(capsys, "spectrum", "--m", "2", "--cutoff", "5", "--format", "csv")
    assert status == 0
    rows = out.strip().splitlines()
    assert rows[0] == "eigenvalue,multiplicity,witnesses"
    assert rows[1].startswith("0,3,")


def test_verify_single_suite(capsys):
    status, out, _ = run(capsys, "verify", "--suite", "lfun")
    assert status == 0
    doc = json.loads(out)
    assert doc["passed"] and doc["checks"]
    assert {c["suite"] for c in doc["checks"]} == {"lfun"}


def test_verify_perturbation_is_detected(capsys):
    status, out, _ = run(capsys, "verify", "--suite", "weak", "--perturb", "0.01")
    assert status == 1
    assert not json.loads(out)["passed"]


def test_expand_sampled_eigenfunction(tmp_path, capsys):
    e = first_eigenfunctions(1, 2, 2)[1]
    f = e.radial()
    path = write_samples(tmp_path / "phi.csv", f.inner, f.outer)
    status, out, _ = run(capsys, "expand", str(path), "--m", "1", "--nu", "2", "--k-terms", "5")
    assert status == 0
    a = [c["a"] for c in json.loads(out)["mode_coeffs"]]
    assert a[1] == pytest.approx(1.0, abs=1e-3)
    assert max(abs(a[i]) for i in (0, 2, 3, 4)) < 1e-3


def test_expand_monomial_csv(tmp_path, capsys):
    path = write_samples(tmp_path / "mono.csv", lambda x: np.ones_like(x), lambda u: np.ones_like(u))
    status, out, _ = run(capsys, "expand", str(path), "--m", "2", "--nu", "0", "--k-terms", "4", "--format", "csv")
    assert status == 0
    rows = [r.split(",") for r in out.strip().splitlines()]
    assert rows[0] == ["k", "lambda", "coefficient", "norm_sq", "defect"]
    assert rows[1][0] == "0" and float(rows[1][2]) == pytest.approx(1.0, abs=1e-6)
    assert float(rows[-1][4]) <= 1e-6


@pytest.mark.parametrize("body", [
    "x,y,z\ninner,0,1\n",
    "branch,x,value\ninner,0,1\ninner,0.5,oops\nouter,0,0\nouter,1,0\n",
    "branch,x,value\ninner,0,1\ninner,1.5,1\nouter,0,0\nouter,1,0\n",
    "branch,x,value\nsideways,0,1\n",
    "branch,x,value\ninner,0,1\n",
])
def test_expand_bad_csv_exit_2(tmp_path, capsys, body):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    status, _, err = run(capsys, "expand", str(path), "--nu", "0")
    assert status == 2 and "error" in err


def test_expand_missing_file(tmp_path, capsys):
    status, _, _ = run(capsys, "expand", str(tmp_path / "none.csv"), "--nu", "0")
    assert status == 2


def test_output_is_deterministic_and_thread_independent(capsys):
    argv = ["spectrum", "--m", "1", "--cutoff", "8"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    _, c, _ = run(capsys, *argv, "--threads", "4")
    assert a == b == c


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "z.json"
    status, out, _ = run(capsys, "zeros", "--nu", "0", "--cutoff", "6", "--out", str(target))
    assert status == 0 and out == ""
    assert json.loads(target.read_text())["sets"][0]["nu"] == 0


def test_dumps_float_format():
    assert dumps({"a": 0.1, "b": 1.0, "c": 3, "d": float("inf")}) == '{"a": 0.10000000000000001, "b": 1.0, "c": 3, "d": null}\n'
    assert json.loads(dumps([np.float64(2.5)])) == [2.5]
