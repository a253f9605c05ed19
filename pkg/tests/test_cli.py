import csv
import json
import subprocess
import sys

import numba as nb
import numpy as np
import pytest

from spinform import _kernels as K
from spinform import dynamics
from spinform.cli import main
from spinform.dynamics import Law

BASE = {"field": {"kind": "constant", "b0": [0, 0, 1]}, "params": {"gamma": 1.0},
        "theta": float(np.pi / 2), "phi": 0.0}


def write_config(tmp_path, name="cfg.json", **overrides):
    cfg = dict(BASE, **overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_simulate_one_period(tmp_path):
    cfg = write_config(tmp_path, law="bloch", t_end=2 * np.pi, dt=1e-3)
    out = tmp_path / "traj.csv"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["t", "mx", "my", "mz", "norm_dev", "purity_dev"]
    assert len(rows) - 1 == int(np.ceil(2 * np.pi / 1e-3)) + 1
    last = [float(x) for x in rows[-1]]
    assert last[0] == 2 * np.pi
    np.testing.assert_allclose(last[1:4], [1, 0, 0], atol=1e-9)
    summary = json.loads((tmp_path / "traj.json").read_text())
    assert summary["status"] == "ok" and summary["n_samples"] == len(rows) - 1


def test_simulate_single_step(tmp_path):
    cfg = write_config(tmp_path, law="von_neumann", t_end=0.1, dt=0.1)
    out = tmp_path / "one.csv"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 3
    assert rows[0][1:3] == ["rho00_re", "rho00_im"]


def test_simulate_spinor_columns(tmp_path):
    cfg = write_config(tmp_path, law="sp_collapse", t_end=0.2, dt=0.1, params={"k_i": 0.3})
    out = tmp_path / "s.csv"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    assert read_csv(out)[0][1:5] == ["psi_up_re", "psi_up_im", "psi_down_re", "psi_down_im"]


@pytest.mark.parametrize("overrides", [
    dict(law="bloch", t_end=1.0),                     # missing dt
    dict(law="bloch", t_end=1.0, dt=1.0, stepsize=1),  # unknown key
    dict(law="bloch", t_end=0.5, dt=1.0),             # t_end < dt
    dict(law="bloch", t_end=1.0, dt=-0.1),
    dict(law="precess", t_end=1.0, dt=0.1),
    dict(law="bloch", t_end=1.0, dt=0.1, theta=4.0),
    dict(law="bloch", t_end=1.0, dt=0.1, params={"gamma": 1, "g": 2}),
    dict(law="bloch", t_end=1.0, dt=0.1, field={"kind": "constant"}),
])
def test_simulate_config_errors(tmp_path, overrides, capsys):
    cfg = write_config(tmp_path, **overrides)
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "x.csv")]) == 2
    assert "configuration error" in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()


def test_bad_json_and_missing_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["simulate", "--config", str(bad)]) == 2
    assert main(["simulate"]) == 2
    assert main(["simulate", "--config", str(tmp_path / "absent.json")]) == 2
    assert main(["frobnicate"]) == 2


def test_simulate_nan_abort(tmp_path, capsys):
    cfg = write_config(tmp_path, law="bloch", field={"kind": "constant", "b0": [0, 0, 1e3]},
                       t_end=1000.0, dt=1.0)
    out = tmp_path / "nan.csv"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 1
    err = capsys.readouterr().err
    assert "integration aborted" in err and '"step"' in err
    assert not out.exists()
    summary = json.loads((tmp_path / "nan.json").read_text())
    assert summary["status"] == "nan_abort"


def test_compare_default_triple(tmp_path):
    cfg = write_config(tmp_path, laws=["bloch", "von_neumann", "schrodinger_pauli"],
                       theta=float(np.pi / 3), t_end=4 * np.pi, dt=1e-3)
    out = tmp_path / "cmp.json"
    assert main(["compare", "--config", cfg, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["all_asserted_pass"]
    assert len(report["checks"]) == 3
    assert all(c["residual"] <= 1e-6 and c["status"] == "pass" for c in report["checks"])


def test_compare_coarse_step_fails(tmp_path):
    cfg = write_config(tmp_path, laws=["bloch", "von_neumann", "schrodinger_pauli"],
                       theta=float(np.pi / 3), t_end=200 * np.pi, dt=0.5)
    out = tmp_path / "cmp.json"
    assert main(["compare", "--config", cfg, "--out", str(out)]) == 1
    report = json.loads(out.read_text())
    assert not report["all_asserted_pass"]
    assert max(c["residual"] for c in report["checks"]) > 1e-6


def test_compare_reports_collapse_variant(tmp_path):
    cfg = write_config(tmp_path, laws=["llg", "nonlinear_vn", "sp_collapse"],
                       params={"k_i": 0.1}, t_end=2 * np.pi, dt=1e-3)
    out = tmp_path / "cmp.json"
    assert main(["compare", "--config", cfg, "--out", str(out)]) == 0
    checks = {c["check"]: c for c in json.loads(out.read_text())["checks"]}
    c = checks["equivalence.llg~sp_collapse[k_i=0.1]"]
    assert c["status"] == "report" and c["tolerance"] is None
    assert checks["equivalence.llg~nonlinear_vn[k_i=0.1]"]["status"] == "pass"


@pytest.mark.parametrize("laws", [["bloch"], ["bloch", "bloch"], None])
def test_compare_needs_two_laws(tmp_path, laws):
    extra = {} if laws is None else {"laws": laws}
    cfg = write_config(tmp_path, t_end=1.0, dt=0.1, **extra)
    assert main(["compare", "--config", cfg, "--out", str(tmp_path / "c.json")]) == 2


def test_collapse_run(tmp_path):
    cfg = write_config(tmp_path, ensemble_size=100_000, seed=7)
    out = tmp_path / "col.json"
    assert main(["collapse", "--config", cfg, "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert abs(res["fraction_up"] - 0.5) <= 0.005
    assert res["passed"] and res["seed"] == 7


def test_collapse_seed_override_and_single(tmp_path):
    cfg = write_config(tmp_path, ensemble_size=1)
    out = tmp_path / "col.json"
    assert main(["collapse", "--config", cfg, "--out", str(out), "--seed", "11"]) == 0
    res = json.loads(out.read_text())
    assert res["fraction_up"] in (0.0, 1.0) and res["seed"] == 11


@pytest.mark.parametrize("overrides", [dict(theta=0.0, ensemble_size=10), dict(ensemble_size=0),
                                       dict(ensemble_size=2.5), dict()])
def test_collapse_config_errors(tmp_path, overrides):
    cfg = write_config(tmp_path, **overrides)
    assert main(["collapse", "--config", cfg, "--out", str(tmp_path / "c.json")]) == 2


def test_verify_filter(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--filter", "pauli*", "--out", str(out)]) == 0
    checks = json.loads(out.read_text())
    assert sorted(c["check"] for c in checks) == ["pauli_commutator", "pauli_identity"]
    assert capsys.readouterr().out.count("PASS") == 2
    assert main(["verify", "--filter", "nope*", "--out", str(out)]) == 2


@nb.njit
def _llg_sign_flipped(y, w, k, hbar):
    mxw = K.cross(y, w)
    return (mxw + k * K.cross(y, mxw)) / (1.0 + k * k)


def test_verify_catches_corrupted_llg(tmp_path, monkeypatch, capsys):
    monkeypatch.setitem(dynamics.LAW_KERNELS, Law.LLG, _llg_sign_flipped)
    out = tmp_path / "v.json"
    assert main(["verify", "--filter", "collapse_trend", "--out", str(out)]) == 1
    assert "FAIL   collapse_trend" in capsys.readouterr().out
    assert json.loads(out.read_text())[0]["status"] == "fail"


def test_module_entry_point(tmp_path):
    out = tmp_path / "v.json"
    proc = subprocess.run([sys.executable, "-m", "spinform", "verify", "--filter", "gyro*",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "gyromagnetic_ratio" in proc.stdout


def test_outputs_are_byte_identical(tmp_path):
    cfg = write_config(tmp_path, law="llg", params={"k_i": 0.1}, t_end=1.0, dt=1e-2)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--config", cfg, "--out", str(a)]) == 0
    assert main(["simulate", "--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    ja, jb = json.loads((tmp_path / "a.json").read_text()), json.loads((tmp_path / "b.json").read_text())
    ja.pop("csv"), jb.pop("csv")
    assert ja == jb
