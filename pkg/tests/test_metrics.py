import math
from fractions import Fraction

import numpy as np
import pytest

from amoebot.metrics import (FitError, centroid, classify, default_fit_range, displacements,
                             ensemble_msd, fit_gamma, msd, net_displacement, success_rate,
                             synthetic_ballistic, synthetic_random_walk, wilson_interval,
                             displacement_summary)
from amoebot.system import ParticleSystem


def test_centroid_exact_height():
    x, y = centroid(ParticleSystem([(0, 0), (1, 0), (0, 1)]))
    assert y == Fraction(1, 2)
    assert math.isclose(x, math.sqrt(3) / 6)


def test_noiseless_power_law():
    t = np.arange(1, 11) * 10
    g, c = fit_gamma(t, 4 * 0.5 * t ** 1.3, (10, 100))
    assert abs(g - 1.3) <= 1e-10
    assert abs(c - math.log(2.0)) <= 1e-10


def test_common_drift_has_zero_msd():
    t = np.arange(0, 101, 10)
    trials = [(t, 0.3 * t, -0.1 * t) for _ in range(5)]
    _, m = ensemble_msd(trials)
    assert np.allclose(m, 0.0)


def test_random_walk_is_diffusive():
    res = msd(synthetic_random_walk(200, 10_000, 100, seed=1))
    assert abs(res.gamma - 1) <= 0.1
    # unit steps: msd(t) = t; 200 trials give roughly 10% scatter per lag
    ratio = res.msd[1:] / res.lags[1:]
    assert ratio.mean() == pytest.approx(1.0, rel=0.2)
    assert res.regime in ("diffusive", "subdiffusive", "superdiffusive")


def test_ballistic_is_quadratic():
    res = msd(synthetic_ballistic(50, 10_000, 100, seed=2))
    assert abs(res.gamma - 2) <= 0.05
    assert res.regime == "superdiffusive"


def test_classify():
    assert classify(1.2) == "superdiffusive"
    assert classify(0.8) == "subdiffusive"
    assert classify(1.0) == "diffusive"
    assert classify(1.04, tol=0.05) == "diffusive"


def test_fit_range_defaults():
    lags = np.arange(0, 1001, 1)
    lo, hi = default_fit_range(lags)
    assert lo >= 2 and math.log10(hi / lo) <= 2 + 1e-9
    assert default_fit_range([0, 10, 20, 30]) == (20, 30)


def test_fit_errors():
    with pytest.raises(FitError):
        fit_gamma([0, 1, 2], [0, 1, 2], (1, 2))
    with pytest.raises(FitError):
        default_fit_range([0, 5])
    with pytest.raises(ValueError):
        msd([(np.arange(3), np.zeros(3), np.zeros(3))])


def test_mismatched_grids():
    a = (np.array([0, 1, 2]), np.zeros(3), np.zeros(3))
    b = (np.array([0, 2, 4]), np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        displacements([a, b])


def test_lag_subset():
    trials = synthetic_random_walk(20, 1000, 10, seed=4)
    res = msd(trials, lags=[0, 10, 50, 100, 500, 1000], fit_range=(10, 1000))
    assert list(res.lags) == [0, 10, 50, 100, 500, 1000]


def test_success_rate_and_summary():
    t = np.array([0, 1])
    trials = [(t, np.array([0, 1.0]), np.array([0, 2.0])),
              (t, np.array([0, -1.0]), np.array([0, -1.0])),
              (t, np.array([0, 0.5]), np.array([0, 3.0]))]
    assert success_rate(trials, "+y") == pytest.approx(2 / 3)
    assert success_rate(trials, "-x") == pytest.approx(1 / 3)
    assert net_displacement(trials[0]) == (1.0, 2.0)
    s = displacement_summary(trials)
    assert s["mean_dy"] == pytest.approx(4 / 3)
    assert s["mean_abs_dx"] == pytest.approx(2.5 / 3)


def test_wilson_interval():
    lo, hi = wilson_interval(8, 10)
    assert lo < 0.8 < hi
    # reference value for 8/10 at 95%
    assert lo == pytest.approx(0.4902, abs=1e-3) and hi == pytest.approx(0.9433, abs=1e-3)
    assert wilson_interval(0, 5)[0] == 0.0
