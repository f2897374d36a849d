# %% [markdown]
# # Mean squared displacement and the anomalous exponent
#
# MSD here is the across-trial variance of the centroid displacement, so a
# common drift contributes nothing.  Synthetic ensembles calibrate the fit.

# %%
import numpy as np

from amoebot.dynamics import DynamicsParams, Kernel, Mode, hexagon, run
from amoebot.light import LightField
from amoebot.metrics import displacements, fit_gamma, msd, synthetic_ballistic, synthetic_random_walk

print("random walk", msd(synthetic_random_walk(200, 10_000, 100, seed=1)).gamma)
print("ballistic  ", msd(synthetic_ballistic(50, 10_000, 100, seed=2)).gamma)

# %% [markdown]
# A short phototaxing ensemble.  Both the drift-free MSD and the raw second
# moment are shown; the latter still contains the systematic upward drift.

# %%
trajs = [run(hexagon(5), DynamicsParams(lam=4.0, kernel=Kernel.UNIFORM6, mode=Mode.PHOTOTAX, seed=s),
             LightField(), 3_000_000, 30_000) for s in range(8)]
res = msd(trajs)
lags, dx, dy = displacements(trajs)
raw, _ = fit_gamma(lags, (dx ** 2 + dy ** 2).mean(axis=0), res.fit_range)
print(f"gamma={res.gamma:.3f} ({res.regime}), raw second moment gamma={raw:.3f}, fit {res.fit_range}")
