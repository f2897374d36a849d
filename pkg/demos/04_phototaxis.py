# %% [markdown]
# # Phototaxis of a 91-particle hexagon
#
# Only the lowest particle of each column sees the light; shadowed particles
# act a quarter of the time.  Over tens of millions of activations the blob
# drifts upward, away from the sources.

# %%
import numpy as np

from amoebot.dynamics import DynamicsParams, Kernel, Mode, hexagon, run
from amoebot.io import render_ascii, render_svg
from amoebot.light import LightField
from amoebot.metrics import success_rate, wilson_interval

trajs = []
for seed in range(4):
    params = DynamicsParams(lam=4.0, kernel=Kernel.UNIFORM6, mode=Mode.PHOTOTAX, seed=seed)
    trajs.append(run(hexagon(5), params, LightField(), 10_000_000, 1_000_000))
    tr = trajs[-1]
    print(seed, "dy", round(tr.y[-1] - tr.y[0], 3), "dx", round(tr.x[-1] - tr.x[0], 3))

rate = success_rate(trajs, "+y")
print("moved up:", rate, "95% interval", wilson_interval(round(rate * len(trajs)), len(trajs)))
print(render_ascii(trajs[0].final, LightField()))

# %%
with open("phototaxis_final.svg", "w") as fh:
    fh.write(render_svg(trajs[0].final, LightField()))
