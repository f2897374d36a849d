"""Compiled chain for long runs.

The configuration lives on a dense occupancy grid that is re-centred when a
particle nears the border; real coordinates are grid coordinates plus an
offset.  Per-column particle counts and minima make the light test O(1).
Random draws follow the order documented in :mod:`amoebot.dynamics`.
"""

from __future__ import annotations

import numba
import numpy as np

from .lattice import DIRECTIONS, RING
from .light import LightField
from .system import DIRECTION_TO_RING, DST_SLOTS, SRC_SLOTS, VALIDITY, ParticleSystem, edge_ring

KERNEL_CODES = {"uniform6": 0, "uniform_valid": 1, "half_valid": 2}

_DIRS = np.array(DIRECTIONS, dtype=np.int64)
_DIR_TO_RING = np.array(DIRECTION_TO_RING, dtype=np.int64)
_RING_OFF = np.array([edge_ring(k) for k in range(6)], dtype=np.int64)
_VALID = VALIDITY.astype(np.uint8)
_ESRC = np.array([sum((m >> s) & 1 for s in SRC_SLOTS) for m in range(256)], dtype=np.int64)
_EDST = np.array([sum((m >> s) & 1 for s in DST_SLOTS) for m in range(256)], dtype=np.int64)

# meta slots
OFF_U, OFF_V, EDGES, SUM_U, SUM_2Y, NCOLS = range(6)
MARGIN = 3
EMPTY_COL = 1 << 40


@numba.njit(cache=True)
def _mask(grid, u, v, k, ring_off):
    m = 0
    for b in range(8):
        if grid[u + ring_off[k, b, 0], v + ring_off[k, b, 1]]:
            m |= 1 << b
    return m


@numba.njit(cache=True)
def _rebuild(grid, pu, pv, colcount, colmin, meta):
    n = pu.shape[0]
    grid[:, :] = 0
    colcount[:] = 0
    colmin[:] = EMPTY_COL
    ncols = 0
    for i in range(n):
        grid[pu[i], pv[i]] = 1
        if colcount[pu[i]] == 0:
            ncols += 1
        colcount[pu[i]] += 1
        if pv[i] < colmin[pu[i]]:
            colmin[pu[i]] = pv[i]
    meta[NCOLS] = ncols


@numba.njit(cache=True)
def _recenter(grid, pu, pv, colcount, colmin, meta):
    side = grid.shape[0]
    umin = pu.min()
    umax = pu.max()
    vmin = pv.min()
    vmax = pv.max()
    su = (side - (umax - umin + 1)) // 2 - umin
    sv = (side - (vmax - vmin + 1)) // 2 - vmin
    pu += su
    pv += sv
    meta[OFF_U] -= su
    meta[OFF_V] -= sv
    _rebuild(grid, pu, pv, colcount, colmin, meta)


@numba.njit(cache=True)
def _apply(i, tu, tv, de, grid, pu, pv, colcount, colmin, meta):
    u = pu[i]
    v = pv[i]
    grid[u, v] = 0
    grid[tu, tv] = 1
    pu[i] = tu
    pv[i] = tv
    meta[EDGES] += de
    meta[SUM_U] += tu - u
    meta[SUM_2Y] += (2 * tv + tu) - (2 * v + u)
    colcount[u] -= 1
    colcount[tu] += 1
    if u != tu:
        if colcount[u] == 0:
            meta[NCOLS] -= 1
        if colcount[tu] == 1:
            meta[NCOLS] += 1
    if colcount[u] == 0:
        colmin[u] = EMPTY_COL
    elif colmin[u] == v and not (tu == u and tv < v):
        w = v + 1
        while not grid[u, w]:
            w += 1
        colmin[u] = w
    if tv < colmin[tu]:
        colmin[tu] = tv
    side = grid.shape[0]
    if tu < MARGIN or tv < MARGIN or tu >= side - MARGIN or tv >= side - MARGIN:
        _recenter(grid, pu, pv, colcount, colmin, meta)


@numba.njit(cache=True)
def _step(grid, pu, pv, colcount, colmin, meta, rng, kernel, phototax, light_on,
          dim_prob, accept, dirs, dir_to_ring, ring_off, valid, esrc, edst, scratch):
    """One activation.  Returns the moved particle index or -1.

    On a move, ``scratch[0:3]`` holds the old position and the edge change.
    """
    n = pu.shape[0]
    i = int(n * rng.random())
    u = pu[i]
    v = pv[i]
    if phototax and light_on and colmin[u] != v:
        if not rng.random() < dim_prob:
            return -1
    if kernel == 0:
        d = int(6 * rng.random())
        tu = u + dirs[d, 0]
        tv = v + dirs[d, 1]
        if grid[tu, tv]:
            return -1
        k = dir_to_ring[d]
        mask = _mask(grid, u, v, k, ring_off)
        if not valid[k, mask]:
            return -1
    else:
        cnt = 0
        for d in range(6):
            tu = u + dirs[d, 0]
            tv = v + dirs[d, 1]
            if grid[tu, tv]:
                continue
            k = dir_to_ring[d]
            m = _mask(grid, u, v, k, ring_off)
            if valid[k, m]:
                scratch[3 + cnt] = d
                scratch[9 + cnt] = m
                cnt += 1
        if kernel == 1:
            if cnt == 0:
                return -1
            j = int(cnt * rng.random())
        else:
            j = int(max(2, cnt) * rng.random())
            if j >= cnt:
                return -1
        d = scratch[3 + j]
        mask = scratch[9 + j]
        tu = u + dirs[d, 0]
        tv = v + dirs[d, 1]
    de = edst[mask] - esrc[mask]
    a = accept[de + 5]
    if a < 1.0:
        if not rng.random() < a:
            return -1
    scratch[0] = u
    scratch[1] = v
    scratch[2] = de
    _apply(i, tu, tv, de, grid, pu, pv, colcount, colmin, meta)
    return i


@numba.njit(cache=True)
def _advance(steps, grid, pu, pv, colcount, colmin, meta, rng, kernel, phototax, light_on,
             dim_prob, accept, dirs, dir_to_ring, ring_off, valid, esrc, edst, scratch):
    moves = 0
    for _ in range(steps):
        if _step(grid, pu, pv, colcount, colmin, meta, rng, kernel, phototax, light_on,
                 dim_prob, accept, dirs, dir_to_ring, ring_off, valid, esrc, edst, scratch) >= 0:
            moves += 1
    return moves


@numba.njit(cache=True)
def _one_step_samples(trials, grid, pu, pv, colcount, colmin, meta, rng, kernel, phototax,
                      light_on, dim_prob, accept, dirs, dir_to_ring, ring_off, valid, esrc,
                      edst, scratch, out):
    """Repeat a single activation from a fixed state, undoing each move.

    ``out[t]`` is the change of the doubled height sum in trial ``t``.
    """
    for t in range(trials):
        before = meta[SUM_2Y]
        i = _step(grid, pu, pv, colcount, colmin, meta, rng, kernel, phototax, light_on,
                  dim_prob, accept, dirs, dir_to_ring, ring_off, valid, esrc, edst, scratch)
        out[t] = meta[SUM_2Y] - before
        if i >= 0:
            _apply(i, scratch[0], scratch[1], -scratch[2], grid, pu, pv, colcount, colmin, meta)


@numba.njit(cache=True)
def grid_connected(grid, pu, pv, stack, seen):
    """Flood fill over occupied grid cells from particle 0."""
    n = pu.shape[0]
    seen[:, :] = 0
    top = 0
    stack[0, 0] = pu[0]
    stack[0, 1] = pv[0]
    seen[pu[0], pv[0]] = 1
    top = 1
    count = 1
    while top > 0:
        top -= 1
        u = stack[top, 0]
        v = stack[top, 1]
        for d in range(6):
            a = u + _DIRS[d, 0]
            b = v + _DIRS[d, 1]
            if grid[a, b] and not seen[a, b]:
                seen[a, b] = 1
                stack[top, 0] = a
                stack[top, 1] = b
                top += 1
                count += 1
    return count == n


@numba.njit(cache=True)
def grid_has_hole(grid, pu, pv, stack, seen):
    """Flood the empty cells of the padded bounding box from its border."""
    u0 = pu.min() - 1
    u1 = pu.max() + 1
    v0 = pv.min() - 1
    v1 = pv.max() + 1
    seen[:, :] = 0
    top = 0
    empty = 0
    for u in range(u0, u1 + 1):
        for v in range(v0, v1 + 1):
            if not grid[u, v]:
                empty += 1
                if u == u0 or u == u1 or v == v0 or v == v1:
                    seen[u, v] = 1
                    stack[top, 0] = u
                    stack[top, 1] = v
                    top += 1
    reached = top
    while top > 0:
        top -= 1
        u = stack[top, 0]
        v = stack[top, 1]
        for d in range(6):
            a = u + _DIRS[d, 0]
            b = v + _DIRS[d, 1]
            if a < u0 or a > u1 or b < v0 or b > v1:
                continue
            if not grid[a, b] and not seen[a, b]:
                seen[a, b] = 1
                stack[top, 0] = a
                stack[top, 1] = b
                top += 1
                reached += 1
    return reached != empty


@numba.njit(cache=True)
def _grid_edges(grid, pu, pv):
    e = 0
    for i in range(pu.shape[0]):
        for d in range(6):
            if grid[pu[i] + _DIRS[d, 0], pv[i] + _DIRS[d, 1]]:
                e += 1
    return e // 2


@numba.njit(cache=True)
def _fuzz(target_moves, max_steps, grid, pu, pv, colcount, colmin, meta, rng, kernel, phototax,
          light_on, dim_prob, accept, dirs, dir_to_ring, ring_off, valid, esrc, edst, scratch,
          stack, seen):
    """Run until ``target_moves`` accepted moves, checking every one globally.

    Returns (accepted moves, failure code); code 0 means no violation,
    1 disconnected, 2 hole, 3 edge cache mismatch.
    """
    moves = 0
    for _ in range(max_steps):
        if moves >= target_moves:
            break
        i = _step(grid, pu, pv, colcount, colmin, meta, rng, kernel, phototax, light_on,
                  dim_prob, accept, dirs, dir_to_ring, ring_off, valid, esrc, edst, scratch)
        if i < 0:
            continue
        moves += 1
        if not grid_connected(grid, pu, pv, stack, seen):
            return moves, 1
        if grid_has_hole(grid, pu, pv, stack, seen):
            return moves, 2
        if _grid_edges(grid, pu, pv) != meta[EDGES]:
            return moves, 3
    return moves, 0


class FastSystem:
    """Grid-backed mirror of a :class:`ParticleSystem` driven by the compiled chain."""

    def __init__(self, system: ParticleSystem, params, light: LightField | None):
        n = system.n
        side = 2 * n + 24
        coords = system.as_array()
        self.grid = np.zeros((side, side), dtype=np.int8)
        self.pu = coords[:, 0].copy()
        self.pv = coords[:, 1].copy()
        self.colcount = np.zeros(side, dtype=np.int64)
        self.colmin = np.zeros(side, dtype=np.int64)
        self.meta = np.zeros(6, dtype=np.int64)
        self.meta[EDGES] = system.edges
        self.meta[SUM_U] = int(coords[:, 0].sum())
        self.meta[SUM_2Y] = int((2 * coords[:, 1] + coords[:, 0]).sum())
        _recenter(self.grid, self.pu, self.pv, self.colcount, self.colmin, self.meta)
        self.scratch = np.zeros(16, dtype=np.int64)
        self.kernel = KERNEL_CODES[params.kernel.value]
        self.phototax = params.mode.value == "phototax"
        self.light_on = light is None or light.enabled
        self.dim_prob = float(params.dim_prob)
        self.accept = params.acceptance_table()

    @property
    def n(self) -> int:
        return self.pu.shape[0]

    def _args(self):
        return (self.grid, self.pu, self.pv, self.colcount, self.colmin, self.meta)

    def _rule(self):
        return (self.kernel, self.phototax, self.light_on, self.dim_prob, self.accept,
                _DIRS, _DIR_TO_RING, _RING_OFF, _VALID, _ESRC, _EDST, self.scratch)

    def advance(self, steps: int, rng) -> int:
        """Execute ``steps`` activations; returns the number of moves made."""
        if steps <= 0:
            return 0
        return _advance(steps, *self._args(), rng, *self._rule())

    def one_step_samples(self, trials: int, rng) -> np.ndarray:
        out = np.zeros(trials, dtype=np.int64)
        _one_step_samples(trials, *self._args(), rng, *self._rule(), out)
        return out

    def fuzz(self, moves: int, rng, max_steps: int | None = None) -> tuple[int, int]:
        side = self.grid.shape[0]
        stack = np.zeros((side * side, 2), dtype=np.int64)
        seen = np.zeros_like(self.grid)
        if max_steps is None:
            max_steps = 1000 * moves
        m, code = _fuzz(moves, max_steps, *self._args(), rng, *self._rule(), stack, seen)
        return int(m), int(code)

    def observe(self) -> tuple[int, int, int, int]:
        lit = int(self.meta[NCOLS]) if self.light_on else self.n
        return (int(self.meta[SUM_U]), int(self.meta[SUM_2Y]), int(self.meta[EDGES]), lit)

    def coords(self) -> np.ndarray:
        return np.stack([self.pu + self.meta[OFF_U], self.pv + self.meta[OFF_V]], axis=1)

    def to_system(self) -> ParticleSystem:
        return ParticleSystem(map(tuple, self.coords()))

    def check(self) -> tuple[bool, bool]:
        """(connected, hole-free) from the grid flood fills."""
        side = self.grid.shape[0]
        stack = np.zeros((side * side, 2), dtype=np.int64)
        seen = np.zeros_like(self.grid)
        return (bool(grid_connected(self.grid, self.pu, self.pv, stack, seen)),
                not bool(grid_has_hole(self.grid, self.pu, self.pv, stack, seen)))
