import filecmp
import json

import numpy as np
import pytest

from graphonlab import bounds as B
from graphonlab import graphons as G
from graphonlab import harness as H
from graphonlab import report
from graphonlab.errors import ParameterError


def small_config(tmp_path, **kw):
    d = dict(graphon="product", n_grid=[40, 80], trials=3, seed=5, out_dir=str(tmp_path))
    d.update(kw)
    return H.SweepConfig.from_dict(d)


def test_trial_seed_stable_under_grid_edits():
    assert H.trial_seed(0, 250, 3) == H.trial_seed(0, 250, 3)
    assert H.trial_seed(0, 250, 3) != H.trial_seed(0, 500, 3)
    assert H.trial_seed(0, 250, 3) != H.trial_seed(1, 250, 3)


def test_sweep_rows_independent_of_grid(tmp_path):
    a = H.run_sweep(small_config(tmp_path / "a", n_grid=[40, 80]))
    b = H.run_sweep(small_config(tmp_path / "b", n_grid=[80]))
    assert np.array_equal(a.gaps(80, 1), b.gaps(80, 1))


@pytest.mark.parametrize("kw", [dict(n_grid=[]), dict(n_grid=[80, 40]), dict(n_grid=[2]),
                                dict(trials=0), dict(kind="x"), dict(latents="x"),
                                dict(top_k=0), dict(formats="pdf")])
def test_config_validation(tmp_path, kw):
    with pytest.raises(ParameterError):
        small_config(tmp_path, **kw)


def test_config_unknown_key():
    with pytest.raises(ParameterError):
        H.SweepConfig.from_dict({"bogus": 1})


def test_sweep_outputs_and_schema(tmp_path):
    res = H.run_sweep(small_config(tmp_path))
    assert len(res.rows) == 2 * 3 * 6
    rows = report.read_csv(tmp_path / "sweep.csv")
    assert list(rows[0]) == H.SWEEP_COLUMNS
    assert (tmp_path / "sweep.svg").exists()
    summ = report.read_csv(tmp_path / "sweep_summary.csv")
    assert list(summ[0]) == H.SUMMARY_COLUMNS
    for r in rows:
        assert float(r["gap"]) == pytest.approx(
            abs(float(r["lambda_graphon"]) - float(r["lambda_sample"])), abs=1e-15)


def test_sweep_deterministic(tmp_path):
    H.run_sweep(small_config(tmp_path / "a"))
    H.run_sweep(small_config(tmp_path / "b"))
    for f in ("sweep.csv", "sweep_summary.csv", "graphon_spectrum.csv", "sweep.svg"):
        assert filecmp.cmp(tmp_path / "a" / f, tmp_path / "b" / f, shallow=False)


def test_sweep_infeasible_bounds_recorded(tmp_path):
    # n = 10 < 4 / x2 makes the Lipschitz bound infeasible; the sweep continues
    res = H.run_sweep(small_config(tmp_path, n_grid=[10, 40]))
    rows10 = [r for r in res.rows if r["n"] == 10]
    assert rows10 and not any(r["lipschitz_valid"] for r in rows10)
    assert all(r["lipschitz_valid"] for r in res.rows if r["n"] == 40)


def test_bound_params_from_graphon():
    cfg = H.SweepConfig()
    lip, pw = cfg.bound_params(G.figure1_family(4, 4.0, 7))
    assert lip.L is None and pw.L == 4.0 and pw.K == 4
    lip, pw = cfg.bound_params(G.product())
    assert lip.L == 1.0 and pw.K == 1


def test_dominance_audit_arithmetic():
    res = H.SweepResult(H.SweepConfig(n_grid=[100], trials=1), G.product(), None, [], {})
    res.rows = [{"gap": g, "standard_valid": True, "standard_value": 0.5,
                 "standard_probability": 0.9, "lipschitz_valid": False,
                 "piecewise_valid": False} for g in (0.1, 0.2, 0.6, 0.3)]
    (a,) = res.dominance()
    assert a.family == "standard" and a.violations == 1 and a.rate == 0.25
    assert a.allowed == pytest.approx(0.1 + 3 * np.sqrt(0.09 / 4))
    assert a.passed


def test_run_bounds_files(tmp_path):
    t = H.run_bounds([100, 1000, 10000], B.BoundParams(L=5.0, K=4), tmp_path)
    assert t.crossover_n == 100
    rows = report.read_csv(tmp_path / "bounds.csv")
    assert list(rows[0]) == H.BOUND_COLUMNS and len(rows) == 9
    assert report.read_csv(tmp_path / "crossover_summary.csv")[0]["crossover_n"] == "100"


def test_run_estimate_files(tmp_path):
    A = np.full((100, 100), 0.4) - 0.4 * np.eye(100)
    res = H.run_estimate(A, out_dir=tmp_path, K_max=3)
    assert res.estimate.global_L < 1e-9
    row = report.read_csv(tmp_path / "estimate.csv")[0]
    assert list(row) == H.ESTIMATE_COLUMNS
    surf = report.read_csv(tmp_path / "surface.csv")
    assert len(surf) == 128 * 128
    assert (tmp_path / "surface.svg").exists()


def test_density_sweep(tmp_path):
    rows = H.density_sweep("edge", "constant:0.5", [20], trials=2, seed=1, out_dir=tmp_path)
    assert rows[0]["density"] == 0.5 and rows[0]["trial"] is None
    assert len(rows) == 3
    assert len(H.median_density_errors(rows, [20])) == 1


def test_sandwich_audit_file(tmp_path):
    recs = H.run_sandwich_audit(4, 5, 0, tmp_path, grid=16, restarts=2)
    rows = report.read_csv(tmp_path / "sandwich.csv")
    assert len(rows) == len(recs) == 4
    assert all(r["lower_ok"] == "true" for r in rows)


def test_config_json_round_trip(tmp_path):
    cfg = small_config(tmp_path, graphon=G.figure1_family(2, 1.0, 0).to_dict())
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg.to_dict()))
    again = H.SweepConfig.load(p)
    assert again.to_dict() == cfg.to_dict()
