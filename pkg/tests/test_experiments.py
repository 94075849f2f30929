import asyncio

import numpy as np
import pytest
from pydantic import ValidationError

from src.discrepancy import LambdaRange, TruncationPolicy
from src.errors import DomainError, FitError, RootError
from src.experiments import (ExperimentConfig, ExperimentRunner, budget_experiment, chord_asymptotics, exponent_for,
                             fit_loglog, lemma_g_roots, lemma_g_scan, points_for, scaling_experiment,
                             summarize_envelope, summarize_scaling)
from src.experiments.lemmas import g_function
from src.experiments.scaling import cell_seed, plan_cells, resolve_seed
from src.geometry import BodySpec

SMALL_POLICY = TruncationPolicy(initial_radius=8, growth=1.5, max_radius=32)


def _disk_config(**overrides):
    fields = dict(kind="scaling", name="disk-grid", body=BodySpec(kind="disk", r=0.25), generators=["grid"],
                  sizes=[4, 9, 16, 25], exponent="sharp_disk", policy=SMALL_POLICY, seed=42)
    fields.update(overrides)
    return ExperimentConfig(**fields)


def test_fit_loglog_recovers_exact_power():
    rows = [(n, 2.0 * n ** 0.5) for n in (16, 64, 256, 1024)]
    fit = fit_loglog(rows)
    assert fit["slope"] == pytest.approx(0.5, abs=1e-12)
    assert fit["intercept"] == pytest.approx(np.log(2.0), abs=1e-12)
    assert fit["r2"] == pytest.approx(1.0)
    assert fit["ci"][0] <= fit["slope"] <= fit["ci"][1]


def test_fit_loglog_on_noisy_power():
    rng = np.random.default_rng(0)
    ns = 2.0 ** np.arange(4, 16)
    rows = list(zip(ns, 3.0 * ns ** 0.4 * np.exp(rng.normal(0.0, 0.05, len(ns)))))
    fit = fit_loglog(rows)
    assert fit["slope"] == pytest.approx(0.4, abs=0.05)
    assert fit["ci"][0] < fit["slope"] < fit["ci"][1]
    assert fit["rows"] == len(ns)


def test_fit_loglog_errors():
    with pytest.raises(FitError):
        fit_loglog([(1, 1), (2, 2)])
    with pytest.raises(FitError):
        fit_loglog([(1, 1), (2, 0), (4, 3)])
    with pytest.raises(FitError):
        fit_loglog([(8, 1), (8, 2), (8, 3)])


def test_exponents():
    assert exponent_for("upper", 1.0) == pytest.approx(0.4)
    assert exponent_for("upper", 0.75) == pytest.approx(2.0 / 4.5)
    assert exponent_for("irredistr", 0.75) == pytest.approx(0.25)
    assert exponent_for("sharp_disk", 0.6) == 0.5
    with pytest.raises(ValueError):
        exponent_for("cubic", 0.75)


def test_experiment_config_validation():
    with pytest.raises(ValidationError):
        ExperimentConfig(sizes=[1, 2, 3])
    with pytest.raises(ValidationError):
        ExperimentConfig(sizes=[1, 2, 2, 3])
    with pytest.raises(ValidationError):
        ExperimentConfig(sizes=[1, 2, 3, 4], sigma=0.4)
    with pytest.raises(ValidationError):
        ExperimentConfig(sizes=[1, 2, 3, 4], exponent="irredistr", sigma=0.75)
    with pytest.raises(ValidationError):
        ExperimentConfig(kind="budget", sizes=[1, 2, 3, 4])
    config = ExperimentConfig(sizes=[1, 2, 3, 4], exponent="irredistr", sigma=0.75, lam=LambdaRange(lo=0.5, hi=1.0))
    assert config.theoretical_exponent == pytest.approx(0.25)


def test_lemma_g_roots_solve_the_equation():
    result = lemma_g_roots(0.75, 0.01)
    g = g_function(0.75)
    negative, positive = result["roots"]["negative"], result["roots"]["positive"]
    assert negative < 0.0 < positive
    assert g(negative) == pytest.approx(0.01, abs=1e-10)
    assert g(positive) == pytest.approx(0.01, abs=1e-10)
    # g(x) ~ x^2 (1/s)(1/s - 1) / 2 near zero
    assert result["ratios"]["positive"] == pytest.approx(np.sqrt(4.5), rel=0.05)


def test_lemma_g_large_y_has_one_root():
    result = lemma_g_roots(0.75, 10.0)
    assert result["roots"]["negative"] is None
    with pytest.raises(RootError):
        lemma_g_roots(0.75, 10.0, require_both=True)


def test_lemma_g_domain():
    with pytest.raises(DomainError):
        lemma_g_roots(0.5, 1.0)
    with pytest.raises(DomainError):
        lemma_g_roots(0.75, 0.0)


def test_lemma_g_scan_passes():
    report = lemma_g_scan(0.75)
    assert report["pass"]
    assert len(report["results"]) == 41


@pytest.mark.parametrize("sigma", [0.6, 0.75, 1.0])
def test_chord_asymptotics_stay_in_band(sigma):
    report = chord_asymptotics(sigma, tilt_grid=[0.0, 1e-2, 0.1])
    assert report["pass"]


def test_chord_asymptotics_rejects_steep_tilt_on_corner_body():
    with pytest.raises(DomainError):
        chord_asymptotics(1.0, tilt_grid=[0.3])


def test_points_for_generators():
    assert points_for("grid_for_sigma", 1024, 1.0).N == 1024
    assert points_for("grid", 50, 1.0).structure == (7, 7)
    a = points_for("uniform", 50, 1.0, seed=3)
    np.testing.assert_array_equal(a.points, points_for("uniform", 50, 1.0, seed=3).points)
    assert points_for("jittered", 50, 1.0, seed=3).N == 49


def test_cell_seeds_are_fixed_and_distinct():
    assert cell_seed(7, 0, 1) == cell_seed(7, 0, 1)
    assert len({cell_seed(7, g, s) for g in range(3) for s in range(4)}) == 12

    config = _disk_config(generators=["grid", "uniform"], seed=7)
    cells = plan_cells(config)
    assert [c["generator"] for c in cells] == ["grid"] * 4 + ["uniform"] * 4
    assert all(c["seed"] is None for c in cells[:4])
    assert cells[4]["seed"] == cell_seed(7, 1, 0)


def test_resolve_seed_keeps_or_draws():
    assert resolve_seed(_disk_config()).seed == 42
    drawn = resolve_seed(_disk_config(seed=None))
    assert drawn.seed is not None


def test_summarize_scaling_on_exact_rows():
    config = _disk_config(exponent="upper", sigma=1.0)
    rows = [{"generator": "grid", "N": n, "D2": 3.0 * n ** 0.4} for n in (16, 64, 256, 1024)]
    report = summarize_scaling(config, rows).to_dict()
    assert report["check"] == "scaling"
    assert report["pass"]
    assert report["slope"] == pytest.approx(0.4)
    assert all(r["ratio"] == pytest.approx(3.0) for r in report["rows"])


def test_summarize_scaling_ignores_failed_rows():
    config = _disk_config(exponent="upper", sigma=1.0)
    rows = [{"generator": "grid", "N": n, "D2": 3.0 * n ** 0.4} for n in (16, 64, 256, 1024)]
    rows.append({"generator": "grid", "N": 4096, "D2": float("nan"), "flagged": True, "error": "boom"})
    report = summarize_scaling(config, rows)
    assert report.passed
    assert report.flagged_rows == 1


def test_summarize_envelope_detects_downward_trend():
    ns = [16, 64, 256, 1024, 4096]
    steady = [{"generator": "grid", "N": n, "D2": 2.0 * n ** 0.4} for n in ns]
    assert summarize_envelope(steady, 0.4, -0.05)["pass"]

    sinking = steady + [{"generator": "uniform", "N": n, "D2": n ** 0.2} for n in ns]
    report = summarize_envelope(sinking, 0.4, -0.05)
    assert not report["pass"]
    assert report["argmin"] == {"generator": "uniform", "N": 4096}
    assert report["ratio_slopes"]["uniform"] == pytest.approx(-0.2)


def test_disk_sweep_is_deterministic():
    first = scaling_experiment(_disk_config())
    second = scaling_experiment(_disk_config())
    assert [r["D2"] for r in first.rows] == [r["D2"] for r in second.rows]
    assert [r["N"] for r in first.rows] == [4, 9, 16, 25]
    assert np.isfinite(first.slope)


def test_runner_returns_rows_in_config_order(tmp_path):
    runner = ExperimentRunner(_disk_config(), threads=3)
    assert asyncio.run(runner.initialize())
    report = asyncio.run(runner.run())
    assert [r["size"] for r in report["rows"]] == [4, 9, 16, 25]
    serial = scaling_experiment(_disk_config())
    assert [r["D2"] for r in report["rows"]] == [r["D2"] for r in serial.rows]

    rows_path, report_path = runner.write_outputs(report, tmp_path)
    assert rows_path.read_text().splitlines()[0].startswith("N,D2,err,ratio")
    assert report_path.exists()


def test_runner_initialize_reports_failure():
    config = _disk_config(body=BodySpec(kind="custom_profile", support=(0.1, -0.2, 0.1, -0.2)))
    runner = ExperimentRunner(config)
    assert not asyncio.run(runner.initialize())
    with pytest.raises(RuntimeError):
        asyncio.run(runner.run())


def test_budget_sweep_reports_each_regime():
    config = ExperimentConfig(kind="budget", name="budget", sigma=0.75, sizes=[64, 128, 256, 512], radius=64.0)
    report = budget_experiment(config)
    assert report["check"] == "budget"
    assert len(report["rows"]) == 4
    for row in report["rows"]:
        assert row["S_G1"] + row["S_G2"] + row["S_G3"] == pytest.approx(row["total"], rel=1e-12)
        assert "S_G3_normalized" in row
