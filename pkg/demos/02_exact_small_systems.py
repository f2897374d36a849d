# %% [markdown]
# # Exact chains for two and three particles
#
# Every connected configuration is enumerated up to translation (and
# optionally reflection) and the one-activation transition matrix is built
# in rationals, or with a symbolic bias.

# %%
from fractions import Fraction

import sympy

from amoebot import oracle
from amoebot.dynamics import Kernel, Mode
from amoebot.oracle import Symmetry

two = oracle.build_chain(2, 4, kernel=Kernel.UNIFORM_VALID)
for i, s in enumerate(two.states):
    print(s, [str(oracle.expected_drift(two, i, k)) for k in (1, 2)])

# %% [markdown]
# Three particles: seven classes.  With a symbolic bias the three-step
# drift of the two bent shapes is an exact rational function of lambda.

# %%
lam = sympy.Symbol("lam", positive=True)
sym = oracle.build_chain(3, lam)
labels = oracle.label_three_particle_states(oracle.build_chain(3, 4))
for name, i in labels.items():
    print(name, sym.states[i], "1-step", sym.one_step_drift(i), " 3-step", oracle.expected_drift(sym, i, 3))
print("lambda above which every 3-step drift beats 1/(64 lam):", max(oracle.bound_threshold(sym).values()))

# %% [markdown]
# Without light the chain is reversible with respect to lambda^edges.

# %%
comp = oracle.build_chain(3, Fraction(4), kernel=Kernel.UNIFORM6, mode=Mode.COMPRESSION_ONLY,
                          symmetry=Symmetry.TRANSLATION)
print(oracle.stationary(comp) == oracle.gibbs_weights(comp))
print(oracle.oracle_report(2, 4))
