# %% [markdown]
# # Lattice, configurations and local moves
#
# Vertices are axial pairs `(u, v)`; one lattice axis is vertical, so a
# vertical neighbour is one unit higher and a diagonal one half a unit.

# %%
from amoebot.lattice import DIRECTIONS, embed, height
from amoebot.system import ParticleSystem, VALIDITY, has_hole, is_connected, local_move_valid
from amoebot.dynamics import hexagon, line, valid_targets
from amoebot.io import render_ascii
from amoebot.light import LightField

for d in DIRECTIONS:
    print(d, "->", tuple(round(x, 3) for x in embed(d)), "height", height(d))

# %% [markdown]
# A move is decided by the eight vertices around the edge it uses.  The
# reference predicate works on sets; the simulator reads a 6 x 256 table
# built from it.

# %%
s = ParticleSystem([(0, 0), (0, 1), (1, 0), (2, -1)])
print(render_ascii(s, LightField()))
for p in s:
    print(p, "can reach", valid_targets(s, p))
print("table entries that allow a move:", int(VALIDITY.sum()), "of", VALIDITY.size)

# %% [markdown]
# The interior of a line is frozen; its ends can fold.

# %%
ln = line(6)
print([len(valid_targets(ln, p)) for p in ln])
print("hexagon(3):", hexagon(3), "connected", is_connected(hexagon(3)), "holes", has_hole(hexagon(3)))
