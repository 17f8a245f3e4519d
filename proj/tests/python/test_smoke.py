import math

import numpy as np
import pytest

import multimin as mm


def test_registry_and_evaluation():
    fns = mm.list_functions()
    assert len(fns) == 15
    by_name = {(f["name"], f["dim"]): f for f in fns}
    assert by_name[("Branin", 2)]["minima"] == 3
    assert by_name[("CosineMix", 3)]["minima"] == 125

    points, values = mm.known_minima("Branin", 2)
    assert points.shape == (3, 2)
    assert values.shape == (3,)
    for row, value in zip(points, values):
        assert mm.evaluate("Branin", 2, row) == pytest.approx(value, abs=1e-3)

    lower, upper = mm.domain("Branin", 2)
    assert list(lower) == [-5.0, 0.0]
    assert list(upper) == [10.0, 15.0]

    with pytest.raises(mm.MultiminError):
        mm.evaluate("Branin", 2, [100.0, 100.0])
    with pytest.raises(mm.MultiminError):
        mm.known_minima("NoSuch", 2)


def test_lhs_sampling_is_stratified_and_deterministic():
    a = mm.lhs_sample([0.0, -1.0], [1.0, 1.0], 8, seed=11)
    b = mm.lhs_sample([0.0, -1.0], [1.0, 1.0], 8, seed=11)
    c = mm.lhs_sample([0.0, -1.0], [1.0, 1.0], 8, seed=12)
    assert a.shape == (8, 2)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert (a[:, 0] >= 0).all() and (a[:, 0] < 1).all()
    # One point per 1/8 stratum along each axis.
    assert sorted(np.floor(a[:, 0] * 8).astype(int)) == list(range(8))


def test_infill_criteria_scalars():
    assert mm.expected_improvement(0.0, 1.0, 0.0) == pytest.approx(
        1.0 / math.sqrt(2.0 * math.pi), rel=1e-12
    )
    assert mm.expected_improvement(1.0, 0.0, 3.0) == 2.0
    assert mm.lcb(1.0, 0.5, 2.0) == 0.0
    assert mm.se(2.5) == 2.5
    assert mm.quantile_sd(-1.0, 1.0, 0.001) == pytest.approx(
        2.0 / 3.0902323061678135, rel=1e-12
    )
    assert mm.quantile_sd(5.0, 5.0, 0.001) == pytest.approx(5e-8, rel=1e-12)
    g = mm.geilm(0.0, 1.0, [0.5, -1.0], 0.0, 1.0, 1.0, lambda_g=2.0)
    assert g == pytest.approx(math.exp(-2.0), rel=1e-12)
    with pytest.raises(mm.MultiminError):
        mm.quantile_sd(-1.0, 1.0, 0.7)


def test_surrogate_fit_predict_gradient():
    lower, upper = mm.domain("Branin", 2)
    x = mm.lhs_sample(lower, upper, 20, seed=3)
    y = np.array([mm.evaluate("Branin", 2, row) for row in x])
    model = mm.fit(x, y, lower, upper, seed=4)
    assert model.n == 20
    assert model.lengthscales.shape == (2,)
    sd_y = float(np.std(y))
    for row, value in zip(x, y):
        mean, sd = model.predict(row)
        assert abs(mean - value) <= 1e-6 * sd_y
        assert sd <= 1e-3 * sd_y
    grad = model.mean_gradient(x[0])
    assert grad.shape == (2,)
    assert np.isfinite(grad).all()
    # Same data and seed refit identically.
    again = mm.fit(x, y, lower, upper, seed=4)
    assert np.array_equal(model.lengthscales, again.lengthscales)

    proposal = mm.propose(model, x, y, "ei", seed=5)
    assert proposal.shape == (2,)
    assert (proposal >= lower).all() and (proposal <= upper).all()


def test_mbo_and_minima_extraction():
    res = mm.run_mbo("CosineMix", 1, "geilm", n_init=9, n_seq=3, seed=7)
    assert res["x"].shape == (12, 1)
    assert res["y"].shape == (12,)
    assert len(res["trace"]) == 3
    assert res["incumbent"] == pytest.approx(min(res["y"]), rel=1e-15)
    incumbents = [t["incumbent"] for t in res["trace"]]
    assert incumbents == sorted(incumbents, reverse=True) or all(
        incumbents[i] >= incumbents[i + 1] for i in range(len(incumbents) - 1)
    )

    found = mm.extract_minima(res["model"], mm.sample_size(1), seed=8, delta=0.001)
    assert isinstance(found["clusters"], list)
    for cluster in found["clusters"]:
        assert cluster["members"] >= 1

    assert mm.sample_size(1) == 200
    assert mm.sample_size(2) == 801


def test_metrics_and_harness_row():
    assert mm.chebyshev([1.0, 2.0], [4.0, -2.0]) == 4.0
    assert mm.peak_ratio(2, 4) == 0.5
    assert mm.ahd(np.array([[0.0, 0.0]]), np.array([[3.0, 4.0]]), r=1.0) == 5.0

    rec = mm.run_cell("Alpine02", 1, "lhs", 16)
    assert rec["function"] == "Alpine02"
    assert rec["n_total"] == 16
    assert rec["h"] == 2
    assert not rec["failed"]
    assert rec["csv"].startswith("Alpine02,1,lhs,16,0,16,0,")
    assert rec["csv"].count(",") == mm.CSV_HEADER.count(",")
    # Same cell and seed reproduce the row bitwise.
    assert mm.run_cell("Alpine02", 1, "lhs", 16)["csv"] == rec["csv"]


def test_oracle_verification():
    report = mm.verify_oracle("Alpine02", 1)
    assert report["pass"]
    assert report["clusters"] == report["expected"] == 2
    assert report["worst_match"] <= 1e-2
