# %% [markdown]
# # Compression of a 100-particle line
#
# Light off, bias lambda = 4.  The edge count should climb well past
# 1.8 * 99 within a few million activations.  The printed table below is
# the pilot that fixed the run length used by the acceptance check.

# %%
import numpy as np

from amoebot.dynamics import DynamicsParams, Kernel, Mode, line, run
from amoebot.io import render_ascii

params = DynamicsParams(lam=4.0, kernel=Kernel.UNIFORM6, mode=Mode.COMPRESSION_ONLY, seed=1)
tr = run(line(100), params, None, 5_000_000, 1_000_000)
for t, e in zip(tr.t, tr.edges):
    print(f"{t:>9d}  edges={e}")
print(render_ascii(tr.final))

# %%
# pilot output (seed 1):
#         0  edges=99
#   1000000  edges=176
#   2000000  edges=220
#   3000000  edges=240
#   4000000  edges=240
#   5000000  edges=250
