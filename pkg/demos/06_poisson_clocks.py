# %% [markdown]
# # Continuous time: independent Poisson clocks
#
# Lit particles ring four times as often as shadowed ones.  Conditioned on
# a move, this is the same chain as activating uniformly and letting
# shadowed particles act with probability 1/4.

# %%
from fractions import Fraction

from amoebot import oracle
from amoebot.dynamics import DynamicsParams, Kernel, Mode, hexagon, light_rates, poisson_run
from amoebot.light import LightField
from amoebot.oracle import Symmetry

params = DynamicsParams(lam=4.0, kernel=Kernel.UNIFORM6, mode=Mode.COMPRESSION_ONLY, seed=0)
tr = poisson_run(hexagon(2), params, LightField(), 200.0, light_rates(4.0, 1.0), record_interval=50.0)
print("events", tr.t[-1], "times", tr.meta["times"].round(2).tolist(), "dy", tr.y[-1] - tr.y[0])

# %%
rated = oracle.build_chain(3, 4, kernel=Kernel.UNIFORM6, mode=Mode.COMPRESSION_ONLY,
                           symmetry=Symmetry.TRANSLATION, rates=(4, 1))
gated = oracle.build_chain(3, 4, kernel=Kernel.UNIFORM6, dim_prob=Fraction(1, 4),
                           symmetry=Symmetry.TRANSLATION)
same = all(rated.probs[i][j] * (4 * s.lit + 3 - s.lit) == gated.probs[i][j] * 12
           for i, s in enumerate(rated.states) for j in range(len(rated)) if i != j)
print("same jump rates:", same)
