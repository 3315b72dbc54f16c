import json

import numpy as np
import pytest

from spintomo.cli import RunConfig, UsageError, main
from spintomo.io import read_figure_csv, read_kernel_csv, read_tomogram_csv
from spintomo.matrix import load_matrix, save_matrix
from spintomo.spin_operators import projector

from conftest import random_density_matrix


def _state(tmp_path, mat, name="rho.json"):
    p = tmp_path / name
    save_matrix(p, mat)
    return p


def test_tomogram_maximally_mixed(tmp_path, capsys):
    rho = _state(tmp_path, np.eye(2) / 2)
    out = tmp_path / "w.csv"
    assert main(["tomogram", "--j", "1", "--in", str(rho), "--out", str(out)]) == 0
    w = read_tomogram_csv(out)
    assert np.allclose(w.values, 0.5, atol=1e-15)
    assert len(out.read_text().splitlines()) - 1 == 2 * 3 * 4 * 4
    text = capsys.readouterr().out
    assert "sum_m w - 1" in text and "int w dangles - 1" in text


def test_tomogram_spin_up_pattern(tmp_path):
    rho = _state(tmp_path, projector(0.5, 0.5))
    out = tmp_path / "w.csv"
    assert main(["tomogram", "--j", "1", "--in", str(rho), "--out", str(out)]) == 0
    w = read_tomogram_csv(out)
    b = w.grid.betas[:, None, None]
    assert np.allclose(w.values[0], np.broadcast_to(np.cos(b / 2) ** 2, w.values[0].shape))
    assert np.allclose(w.values[1], np.broadcast_to(np.sin(b / 2) ** 2, w.values[1].shape))


@pytest.mark.parametrize("tj", [1, 2, 3, 5])
def test_tomogram_reconstruct_roundtrip(tmp_path, rng, tj):
    rho = random_density_matrix(tj + 1, rng)
    src = _state(tmp_path, rho.mat)
    w, rec = tmp_path / "w.csv", tmp_path / "rec.json"
    assert main(["tomogram", "--j", str(tj), "--in", str(src), "--out", str(w), "--oversample", "2"]) == 0
    assert main(["reconstruct", "--in", str(w), "--out", str(rec)]) == 0
    assert np.linalg.norm(load_matrix(rec) - rho.mat) < 1e-10


def test_reconstruct_pure_state(tmp_path):
    src = _state(tmp_path, projector(1, 0))
    w, rec = tmp_path / "w.csv", tmp_path / "rec.json"
    main(["tomogram", "--j", "2", "--in", str(src), "--out", str(w)])
    assert main(["reconstruct", "--j", "2", "--in", str(w), "--out", str(rec)]) == 0
    assert np.allclose(load_matrix(rec), projector(1, 0), atol=1e-12)


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("nonsense\n")
    assert main(["reconstruct", "--in", str(bad), "--out", str(tmp_path / "x.json")]) == 2
    (tmp_path / "bad.json").write_text("{not json")
    assert main(["tomogram", "--j", "1", "--in", str(tmp_path / "bad.json"), "--out", str(tmp_path / "w.csv")]) == 2
    notstate = _state(tmp_path, np.diag([1.5, -0.5]))
    assert main(["tomogram", "--j", "1", "--in", str(notstate), "--out", str(tmp_path / "w.csv")]) == 2
    assert "negative eigenvalue" in capsys.readouterr().err
    wrongdim = _state(tmp_path, np.eye(3) / 3, "three.json")
    assert main(["tomogram", "--j", "1", "--in", str(wrongdim), "--out", str(tmp_path / "w.csv")]) == 2
    assert main(["tomogram", "--j", "1", "--in", str(tmp_path / "missing.json"), "--out", "x"]) == 2
    assert main(["nonsense"]) == 2
    assert main(["tomogram", "--j", "13", "--in", str(wrongdim), "--out", "x"]) == 2


def test_runconfig_limits(tmp_path):
    RunConfig("figure", twice_j=100, output=tmp_path)
    with pytest.raises(UsageError):
        RunConfig("figure", twice_j=101, output=tmp_path)
    with pytest.raises(UsageError):
        RunConfig("verify", oversample=0)
    with pytest.raises(UsageError):
        RunConfig("verify", tol=-1.0)


def _points(tmp_path, entries):
    p = tmp_path / "pts.json"
    p.write_text(json.dumps(entries))
    return p


def test_kernel_qubit_columns_agree(tmp_path, rng):
    entries = [[{"m": float(rng.choice([-0.5, 0.5])), "alpha": float(rng.uniform(0, 6)),
                 "beta": float(rng.uniform(0, 3)), "gamma": float(rng.uniform(0, 6))} for _ in range(3)]
               for _ in range(10)]
    out = tmp_path / "k.csv"
    for kind in ("star", "dual"):
        assert main(["kernel", "--j", "1", "--kernel", kind, "--in", str(_points(tmp_path, entries)),
                     "--out", str(out)]) == 0
        vals = read_kernel_csv(out)
        assert len(vals) == 10 and all(abs(n - c) < 1e-12 for n, c in vals)


def test_kernel_coplanar_real(tmp_path):
    entries = [[{"m": 1, "alpha": 0.0, "beta": 0.4}, {"m": 0, "alpha": 0.0, "beta": 1.2},
                {"m": -1, "alpha": 0.0, "beta": 2.5}]]
    out = tmp_path / "k.csv"
    assert main(["kernel", "--j", "2", "--kernel", "star", "--in", str(_points(tmp_path, entries)),
                 "--out", str(out)]) == 0
    (num, closed), = read_kernel_csv(out)
    assert num.imag == pytest.approx(0, abs=1e-12) and closed.imag == 0.0


def test_kernel_closed_needs_small_j(tmp_path):
    entries = [[{"m": 0.5, "beta": 0.4}, {"m": 0.5, "beta": 1.0}]]
    pts = _points(tmp_path, entries)
    assert main(["kernel", "--j", "3", "--form", "closed", "--in", str(pts), "--out", str(tmp_path / "k.csv")]) == 2
    assert main(["kernel", "--j", "3", "--form", "numeric", "--in", str(pts), "--out", str(tmp_path / "k.csv")]) == 0
    assert main(["kernel", "--j", "1", "--kernel", "star", "--in", str(pts), "--out", str(tmp_path / "k.csv")]) == 2


def test_figure_command(tmp_path):
    assert main(["figure", "--out", str(tmp_path), "--resolution", "37"]) == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["tomogram_2j100_2mu0.csv", "tomogram_2j100_2mu100.csv", "tomogram_2j100_2mu50.csv"]
    betas, ms, exact, asym = read_figure_csv(tmp_path / "tomogram_2j100_2mu100.csv")
    assert exact.shape == (37, 101)
    assert np.allclose(exact.sum(axis=1), 1.0, atol=1e-9)
    assert np.all(np.isfinite(asym[1:-1]))


def test_verify_perturbation_fails_biorthogonality(tmp_path):
    out = tmp_path / "r.json"
    code = main(["verify", "--only", "biorthogonality", "--perturb-quantizer", "1.01", "--out", str(out)])
    report = json.loads(out.read_text())
    assert code == 1 and not report["passed"]
    (check,) = report["checks"]
    assert check["name"] == "biorthogonality" and not check["passed"]
    assert main(["verify", "--only", "biorthogonality", "--out", str(out)]) == 0


def test_verify_seed_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--seed", "7", "--only", "closed_forms", "marginalization", "pairing"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_default_run_passes(tmp_path):
    out = tmp_path / "r.json"
    code = main(["verify", "--out", str(out)])
    report = json.loads(out.read_text())
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert code == 0, f"failed checks: {failed}"
