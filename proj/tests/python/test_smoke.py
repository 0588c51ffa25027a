"""Smoke tests for the python module: every exposed operation runs end to end
and returns sane shapes/values. Numerical depth lives in the C++ test suite."""

import json

import pytest

import gqito

THETA0 = {"omega": 0.2, "beta": 0.3, "gamma": 0.4, "alpha": 0.1, "mu": 0.0}


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_version_string():
    assert gqito.__version__ == "0.1.0"


def test_coefficient_mapping_frozen_values():
    c1 = gqito.derive_coeffs(THETA0, 1)
    assert rel(c1["omega_g"], 0.23323920505066873599) < 1e-13
    assert rel(c1["beta_g"], 0.25014119242399689602) < 1e-13
    assert rel(c1["alpha_g"], 0.083380397474665632005) < 1e-13
    assert c1["decay"] == 0.4
    assert c1["j"] == 1

    c2 = gqito.derive_coeffs(THETA0, 2)
    assert rel(c2["omega_g"], 0.053944747576094374206) < 1e-13
    assert rel(c2["beta_g"], 0.13816575727171687738) < 1e-13
    assert rel(c2["alpha_g"], 0.046055252423905625794) < 1e-13
    assert abs(c2["decay"] - 0.7) < 1e-15


def test_expected_window_iv_matches_truncated_series():
    closed = gqito.expected_window_iv(THETA0, 0.667, 1)
    assert rel(closed, 0.66694460132491555211) < 1e-13
    series = gqito.g_series_truncated(THETA0, 0.667, 1, 60)
    assert rel(closed, series) < 1e-12


def test_bad_horizon_raises_value_error():
    with pytest.raises(ValueError):
        gqito.derive_coeffs(THETA0, 9)


def test_simulation_and_rv_shapes():
    panel = gqito.simulate_gqarch(THETA0, days=6, m=120, noise_sd=0.001, seed=5)
    assert panel.n_days == 6
    assert panel.m == 120
    assert len(panel.clean) == 6 * 121
    assert len(panel.observed) == 6 * 121
    assert panel.clean != panel.observed  # noise was added
    assert len(panel.spot_var_open) == 6
    assert all(v > 0 for v in panel.true_iv(1))
    assert len(panel.true_iv(3)) == 18

    daily = gqito.rv(panel, 1)
    assert len(daily) == 6
    assert all(v > 0 for v in daily)
    half = gqito.rv(panel, 2, "naive")
    assert len(half) == 12
    with pytest.raises(ValueError):
        gqito.rv(panel, 7)


def test_heston_simulation():
    panel = gqito.simulate_heston(days=3, m=78, seed=2)
    assert panel.n_days == 3
    assert all(v > 0 for v in panel.true_iv(1))


def test_fit_returns_parameters_inside_the_box():
    panel = gqito.simulate_gqarch(THETA0, days=60, m=240, seed=9)
    fit = gqito.fit(panel, estimator="naive")
    p = fit["params"]
    assert 1e-6 < p["omega"] < 5.0
    assert 1e-4 < p["beta"] < 0.999
    assert 1e-4 < p["gamma"] < 0.999
    assert -2.0 < p["alpha"] < 2.0
    assert isinstance(fit["converged"], bool)
    assert fit["g1"] > 0
    assert fit["se_ok"] is False  # compute_se defaults off in the binding
    assert len(fit["se"]) == 4


def test_evaluate_shapes_and_positivity():
    panel = gqito.simulate_gqarch(THETA0, days=30, m=120, noise_sd=0.001, seed=11)
    out = gqito.evaluate(panel, in_sample_days=24, horizons=[1, 2])
    assert len(out["summary"]) == 2
    for entry in out["summary"]:
        expected_windows = 6 * entry["horizon"]
        assert entry["n_used"] + entry["n_skipped"] == expected_windows
    assert len(out["rows"]) == 6 + 12
    assert all(r["forecast"] > 0 for r in out["rows"] if not r["skipped"])
    assert out["fit"]["params"]["omega"] > 0


def test_csv_round_trip(tmp_path):
    panel = gqito.simulate_gqarch(THETA0, days=2, m=24, noise_sd=0.001, seed=3)
    path = str(tmp_path / "panel.csv")
    panel.export_csv(path)
    back = gqito.ingest_ticks(path)
    assert back.n_days == 2
    assert back.m == 24
    assert back.clean == panel.clean
    assert back.observed == panel.observed


def test_run_experiment_writes_artifacts(tmp_path):
    cfg = {
        "seed": 3,
        "simulate": {"dgp": "gqarch", "days": 8, "ticks_per_day": 60, "noise_sd": 0.001},
        "rv": {"estimator": "naive", "horizons": [1, 2]},
        "fit": {"compute_se": False},
        "forecast": {"in_sample_days": 6, "horizons": [1, 2]},
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    manifest = json.loads(gqito.run_experiment(str(cfg_path), str(tmp_path / "out")))
    assert manifest["status"] == "ok"
    names = {entry["path"] for entry in manifest["outputs"]}
    assert {"panel.csv", "truth.csv", "rv_j1.csv", "rv_j2.csv", "fit.json",
            "forecasts.csv", "eval_summary.csv"} <= names
    for name in names:
        assert (tmp_path / "out" / name).exists()


def test_bad_config_raises_value_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"zzz": 1}')
    with pytest.raises(ValueError):
        gqito.run_experiment(str(bad), str(tmp_path / "o"))
