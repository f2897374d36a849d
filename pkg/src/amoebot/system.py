"""Particle configurations and the local movement rules that keep them connected.

A configuration is a finite set of occupied lattice vertices.  Particles are
also kept in an indexed list so a uniformly random particle can be drawn in
O(1); the index of a particle is stable across moves.

Move validity
-------------
A particle at ``src`` may hop to an unoccupied neighbour ``dst`` when the
eight vertices surrounding the edge ``src-dst`` satisfy one of two local
conditions.  Let ``S`` be the occupied common neighbours of ``src`` and
``dst``:

* ``S`` non-empty, and every occupied vertex of the eight-vertex
  neighbourhood reaches a member of ``S`` through occupied vertices of that
  neighbourhood;
* ``S`` empty, both ``src`` and ``dst`` have other occupied neighbours, and
  the occupied neighbours of each endpoint form one contiguous run.

Additionally neither endpoint may have five other occupied neighbours.  At
``src`` this would leave a hole behind; at ``dst`` it means ``dst`` already
is a hole, and excluding it keeps the rule symmetric under reversal of the
move.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

import numpy as np

from .lattice import DIRECTIONS, RING, AxialCoord, are_adjacent, neighbors


class ParticleSystem:
    """A connected set of particles on the triangular lattice.

    Parameters
    ----------
    coords : iterable of (u, v) pairs
        Occupied vertices.  Duplicates are rejected.
    """

    def __init__(self, coords: Iterable):
        positions = [AxialCoord(int(c[0]), int(c[1])) for c in coords]
        if not positions:
            raise ValueError("a particle system needs at least one particle")
        index = {c: i for i, c in enumerate(positions)}
        if len(index) != len(positions):
            raise ValueError("duplicate particle coordinates")
        self.positions: list[AxialCoord] = positions
        self._index: dict[AxialCoord, int] = index
        self.edges: int = edge_count(self)

    @property
    def n(self) -> int:
        return len(self.positions)

    def __len__(self) -> int:
        return len(self.positions)

    def __contains__(self, c) -> bool:
        return c in self._index

    def __iter__(self) -> Iterator[AxialCoord]:
        return iter(self.positions)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParticleSystem):
            return NotImplemented
        return self._index.keys() == other._index.keys()

    def __repr__(self) -> str:
        return f"ParticleSystem(n={self.n}, edges={self.edges})"

    @property
    def occupied(self) -> frozenset:
        return frozenset(self._index)

    def particle_at(self, c) -> int | None:
        return self._index.get(c)

    def count_neighbors(self, c, exclude=None) -> int:
        """Occupied neighbours of ``c``, not counting ``exclude``."""
        u, v = c
        k = 0
        for du, dv in DIRECTIONS:
            nb = (u + du, v + dv)
            if nb in self._index and nb != exclude:
                k += 1
        return k

    def move(self, src, dst) -> None:
        """Relocate the particle at ``src`` to the empty vertex ``dst``.

        The cached edge count is updated incrementally.  No validity check is
        made here; see :func:`local_move_valid`.
        """
        i = self._index.pop(src)
        if dst in self._index:
            self._index[src] = i
            raise ValueError(f"target {dst} is occupied")
        self.edges += self.count_neighbors(dst, exclude=src) - self.count_neighbors(src)
        dst = AxialCoord(*dst)
        self._index[dst] = i
        self.positions[i] = dst

    def copy(self) -> "ParticleSystem":
        new = ParticleSystem.__new__(ParticleSystem)
        new.positions = list(self.positions)
        new._index = dict(self._index)
        new.edges = self.edges
        return new

    def sorted_coords(self) -> list[AxialCoord]:
        return sorted(self._index)

    def translated(self, du: int, dv: int) -> "ParticleSystem":
        return ParticleSystem((u + du, v + dv) for u, v in self.positions)

    def as_array(self) -> np.ndarray:
        return np.array(self.positions, dtype=np.int64).reshape(-1, 2)


def edge_count(system) -> int:
    """Number of lattice edges with both endpoints occupied (from scratch)."""
    occ = system.occupied if isinstance(system, ParticleSystem) else set(system)
    total = 0
    for u, v in occ:
        # each edge once: only the three "forward" directions
        for du, dv in ((0, 1), (1, 0), (1, -1)):
            if (u + du, v + dv) in occ:
                total += 1
    return total


def boundary_pairs(system) -> int:
    """Ordered (occupied, unoccupied) adjacent pairs; ``6n = 2e + b``."""
    occ = system.occupied
    return sum(1 for c in occ for nb in neighbors(c) if nb not in occ)


def _flood(start: Iterable, allowed: set) -> set:
    seen = set(start)
    queue = deque(seen)
    while queue:
        c = queue.popleft()
        for nb in neighbors(c):
            if nb in allowed and nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return seen


def is_connected(system) -> bool:
    """True when the occupancy graph has a single component."""
    occ = set(system.occupied if isinstance(system, ParticleSystem) else system)
    if not occ:
        return True
    return len(_flood([next(iter(occ))], occ)) == len(occ)


def has_hole(system) -> bool:
    """True when some empty vertex is enclosed by particles.

    Empty vertices of the bounding box padded by one are flooded from the
    box border; anything left over is a hole.
    """
    occ = set(system.occupied if isinstance(system, ParticleSystem) else system)
    us = [c[0] for c in occ]
    vs = [c[1] for c in occ]
    u0, u1 = min(us) - 1, max(us) + 1
    v0, v1 = min(vs) - 1, max(vs) + 1
    empty = {
        (u, v)
        for u in range(u0, u1 + 1)
        for v in range(v0, v1 + 1)
        if (u, v) not in occ
    }
    border = [c for c in empty if c[0] in (u0, u1) or c[1] in (v0, v1)]
    outside = _flood(border, empty)
    return len(outside) != len(empty)


def _single_run(cells: set) -> bool:
    return not cells or len(_flood([next(iter(cells))], cells)) == len(cells)


def local_move_valid(system, src, dst) -> bool:
    """Whether the particle at ``src`` may hop to the neighbour ``dst``.

    Only the eight vertices around the edge ``src-dst`` are inspected.
    """
    if dst in system or not are_adjacent(src, dst):
        return False
    around_src = {c for c in neighbors(src) if c != dst and c in system}
    around_dst = {c for c in neighbors(dst) if c != src and c in system}
    if len(around_src) == 5 or len(around_dst) == 5:
        return False
    common = around_src & around_dst
    region = around_src | around_dst
    if common:
        return _flood(common, region) == region
    if not around_src or not around_dst:
        return False
    return _single_run(around_src) and _single_run(around_dst)


# --- table-driven form -----------------------------------------------------
#
# For a move in direction RING[k] the eight surrounding vertices, relative to
# src, are listed cyclically around the edge.  Slots 0 and 4 are the two
# common neighbours; slots 0..4 surround src and slots 4..7,0 surround dst.


def edge_ring(k: int) -> list[AxialCoord]:
    """Offsets (relative to ``src``) of the eight vertices around edge ``k``."""
    d = RING
    step = d[k]
    near = [d[(k + j) % 6] for j in range(1, 6)]
    far = [step + d[(k + j) % 6] for j in (5, 0, 1)]
    return near + far


SRC_SLOTS = (0, 1, 2, 3, 4)
DST_SLOTS = (4, 5, 6, 7, 0)


def ring_mask(system, src, k: int) -> int:
    """Occupancy bitmask of the eight vertices around the edge ``src -> src+RING[k]``."""
    u, v = src
    mask = 0
    for bit, (du, dv) in enumerate(edge_ring(k)):
        if (u + du, v + dv) in system:
            mask |= 1 << bit
    return mask


def mask_counts(mask: int) -> tuple[int, int]:
    """(neighbours of src, neighbours of dst) encoded in a ring mask."""
    e = sum((mask >> s) & 1 for s in SRC_SLOTS)
    e2 = sum((mask >> s) & 1 for s in DST_SLOTS)
    return e, e2


def build_validity_table() -> np.ndarray:
    """``table[k, mask]`` = validity of a move in direction ``RING[k]``.

    Evaluated with :func:`local_move_valid` on the bare neighbourhood, which
    is all that function looks at.
    """
    table = np.zeros((6, 256), dtype=np.uint8)
    origin = AxialCoord(0, 0)
    for k in range(6):
        ring = edge_ring(k)
        dst = origin + RING[k]
        for mask in range(256):
            cells = [origin] + [ring[b] for b in range(8) if (mask >> b) & 1]
            table[k, mask] = local_move_valid(_CellSet(cells), origin, dst)
    return table


class _CellSet(set):
    """Bare occupancy set accepted by :func:`local_move_valid`."""


#: Map a DIRECTIONS index to its RING index.
DIRECTION_TO_RING = tuple(RING.index(d) for d in DIRECTIONS)

VALIDITY = build_validity_table()
