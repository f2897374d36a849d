"""Observables and diffusion analysis of simulated trajectories.

The ensemble mean squared displacement at lag ``t`` is

    msd(t) = < |r(t) - r(0)|^2 > - | < r(t) - r(0) > |^2

averaged over independent trials, and the anomalous exponent ``gamma`` is
the least-squares slope of ``log msd`` against ``log t``, with
``msd = 4 D t**gamma``.  Units are lattice lengths and iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import stats

from .lattice import SQRT3_2, height


class FitError(ValueError):
    """Raised when a log-log fit cannot be made."""


def centroid(system) -> tuple[float, Fraction]:
    """Centre of mass: ``x`` as a float, ``y`` (the system height) exact."""
    n = len(system)
    if n == 0:
        raise ValueError("empty system has no centroid")
    x = sum(c[0] for c in system) * SQRT3_2 / n
    y = sum((height(c) for c in system), Fraction(0)) / n
    return x, y


@dataclass
class MsdResult:
    lags: np.ndarray
    msd: np.ndarray
    gamma: float
    log_intercept: float
    fit_range: tuple[int, int]

    @property
    def diffusion_coefficient(self) -> float:
        return math.exp(self.log_intercept) / 4.0

    @property
    def regime(self) -> str:
        return classify(self.gamma)


def _positions(trial) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if hasattr(trial, "x") and hasattr(trial, "t"):
        return np.asarray(trial.t), np.asarray(trial.x, float), np.asarray(trial.y, float)
    t, x, y = trial
    return np.asarray(t), np.asarray(x, float), np.asarray(y, float)


def displacements(trials: Sequence) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(lags, dx, dy) with ``dx[k, i]`` the x displacement of trial ``k`` at lag ``i``."""
    if not trials:
        raise ValueError("no trials")
    t0, _, _ = _positions(trials[0])
    dx, dy = [], []
    for trial in trials:
        t, x, y = _positions(trial)
        if len(t) != len(t0) or np.any(t != t0):
            raise ValueError("trials are recorded on different grids")
        dx.append(x - x[0])
        dy.append(y - y[0])
    return t0 - t0[0], np.array(dx), np.array(dy)


def ensemble_msd(trials: Sequence) -> tuple[np.ndarray, np.ndarray]:
    lags, dx, dy = displacements(trials)
    sq = (dx ** 2 + dy ** 2).mean(axis=0)
    drift = dx.mean(axis=0) ** 2 + dy.mean(axis=0) ** 2
    return lags, np.maximum(sq - drift, 0.0)


def default_fit_range(lags: Sequence[int]) -> tuple[int, int]:
    """Skip lag 0 and the first recorded lag; keep at most the middle two decades."""
    pos = [int(t) for t in lags if t > 0]
    if len(pos) < 2:
        raise FitError("not enough positive lags")
    lo, hi = pos[1], pos[-1]
    span = math.log10(hi / lo)
    if span > 2:
        centre = 0.5 * (math.log10(lo) + math.log10(hi))
        lo = max(lo, int(math.ceil(10 ** (centre - 1))))
        hi = min(hi, int(math.floor(10 ** (centre + 1))))
    return lo, hi


def fit_gamma(lags, msd, fit_range: tuple[int, int] | None = None) -> tuple[float, float]:
    """OLS fit of ``log msd = gamma * log t + log(4D)`` on ``fit_range``."""
    lags = np.asarray(lags, dtype=float)
    msd = np.asarray(msd, dtype=float)
    if fit_range is None:
        fit_range = default_fit_range(lags)
    lo, hi = fit_range
    sel = (lags >= lo) & (lags <= hi) & (lags > 0) & (msd > 0)
    if sel.sum() < 3:
        raise FitError(f"fit impossible: {int(sel.sum())} positive lags in [{lo}, {hi}]")
    slope, intercept = np.polyfit(np.log(lags[sel]), np.log(msd[sel]), 1)
    return float(slope), float(intercept)


def msd(trials: Sequence, lags: Sequence[int] | None = None,
        fit_range: tuple[int, int] | None = None) -> MsdResult:
    """Ensemble MSD of the centroid and its fitted exponent.

    ``lags`` optionally restricts the output to a subset of the recorded
    lags.  Needs at least two trials on identical record grids.
    """
    if len(trials) < 2:
        raise ValueError("need at least two trials")
    all_lags, values = ensemble_msd(trials)
    if lags is not None:
        keep = np.isin(all_lags, np.asarray(lags))
        all_lags, values = all_lags[keep], values[keep]
    if fit_range is None:
        fit_range = default_fit_range(all_lags)
    gamma, intercept = fit_gamma(all_lags, values, fit_range)
    return MsdResult(all_lags, values, gamma, intercept, tuple(int(v) for v in fit_range))


def classify(gamma: float, tol: float = 0.0) -> str:
    if gamma > 1 + tol:
        return "superdiffusive"
    if gamma < 1 - tol:
        return "subdiffusive"
    return "diffusive"


_AXES = {"+y": (1, 1), "-y": (1, -1), "+x": (0, 1), "-x": (0, -1)}


def net_displacement(trial) -> tuple[float, float]:
    _, x, y = _positions(trial)
    return float(x[-1] - x[0]), float(y[-1] - y[0])


def success_rate(trials: Sequence, axis: str = "+y") -> float:
    """Fraction of trials whose net displacement points along ``axis``."""
    if not trials:
        raise ValueError("need at least one trial")
    component, sign = _AXES[axis]
    wins = sum(1 for tr in trials if sign * net_displacement(tr)[component] > 0)
    return wins / len(trials)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("trials must be positive")
    z = stats.norm.ppf(0.5 + confidence / 2)
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def displacement_summary(trials: Sequence) -> dict:
    """Mean and spread of net displacement, lateral (x) and height (y)."""
    d = np.array([net_displacement(tr) for tr in trials])
    return {
        "mean_dx": float(d[:, 0].mean()), "std_dx": float(d[:, 0].std(ddof=1)) if len(d) > 1 else 0.0,
        "mean_dy": float(d[:, 1].mean()), "std_dy": float(d[:, 1].std(ddof=1)) if len(d) > 1 else 0.0,
        "mean_abs_dx": float(np.abs(d[:, 0]).mean()),
    }


# --- synthetic ensembles with known laws -----------------------------------


def synthetic_random_walk(trials: int, steps: int, record_interval: int, seed: int) -> list:
    """Centroid doing an unbiased walk over the six unit lattice directions."""
    rng = np.random.default_rng(seed)
    ang = np.deg2rad([90, 270, 30, 210, 330, 150])
    vec = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    t = np.arange(0, steps + 1, record_interval)
    out = []
    for _ in range(trials):
        k = rng.integers(0, 6, size=steps)
        path = np.vstack([[0.0, 0.0], np.cumsum(vec[k], axis=0)])[t]
        out.append((t, path[:, 0], path[:, 1]))
    return out


def synthetic_ballistic(trials: int, steps: int, record_interval: int, seed: int,
                        speed: float = 1.0) -> list:
    """Straight noiseless runs at a common speed in seeded random directions."""
    rng = np.random.default_rng(seed)
    t = np.arange(0, steps + 1, record_interval)
    out = []
    for _ in range(trials):
        a = rng.uniform(0, 2 * np.pi)
        out.append((t, speed * np.cos(a) * t, speed * np.sin(a) * t))
    return out
