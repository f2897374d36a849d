"""Markov-chain dynamics: Metropolis compression and light-dependent phototaxing.

Every activation consumes uniform doubles from a ``numpy.random.Generator``
in a fixed order, shared with the compiled kernel in :mod:`amoebot._kernel`
so both produce bit-identical runs from the same seed:

1. particle index ``floor(n * r)``;
2. in phototax mode, if the particle is in shadow: proceed iff ``r < dim_prob``;
3. proposal, depending on the kernel:

   * ``UNIFORM6``: direction ``floor(6 * r)`` in ``lattice.DIRECTIONS`` order;
     stop if the target is occupied or the move is invalid;
   * ``UNIFORM_VALID``: valid targets in ``DIRECTIONS`` order, pick
     ``floor(m * r)``; stop if there are none;
   * ``HALF_VALID``: as above but pick ``floor(max(2, m) * r)`` and stop if
     that index is past the end, so each valid target has probability 1/2
     whenever there are at most two of them (the small-system algorithms);

4. Metropolis filter: with ``d = e' - e``, accept outright when
   ``lambda**d >= 1``, otherwise draw ``q`` and accept iff ``q < lambda**d``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .lattice import DIRECTIONS, SQRT3_2, AxialCoord, twice_height
from .light import LightField, is_lit
from .system import ParticleSystem, is_connected, local_move_valid


class Kernel(enum.Enum):
    UNIFORM6 = "uniform6"
    UNIFORM_VALID = "uniform_valid"
    HALF_VALID = "half_valid"


class Mode(enum.Enum):
    COMPRESSION_ONLY = "compression"
    PHOTOTAX = "phototax"


@dataclass(frozen=True)
class DynamicsParams:
    lam: float = 4.0
    dim_prob: Fraction = Fraction(1, 4)
    kernel: Kernel = Kernel.UNIFORM6
    mode: Mode = Mode.PHOTOTAX
    seed: int = 0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        dp = Fraction(self.dim_prob)
        if not 0 < dp <= 1:
            raise ValueError(f"dim_prob must lie in (0, 1], got {self.dim_prob}")
        object.__setattr__(self, "dim_prob", dp)
        object.__setattr__(self, "kernel", Kernel(self.kernel))
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def compression_guaranteed(self) -> bool:
        return self.lam > 2 + math.sqrt(2)

    def acceptance_table(self) -> np.ndarray:
        """``lam ** d`` for ``d = -5 .. 5`` (index ``d + 5``)."""
        return np.array([float(self.lam) ** d for d in range(-5, 6)])


@dataclass(frozen=True)
class MoveProposal:
    src: AxialCoord
    dst: AxialCoord
    e: int
    e2: int


# --- single activations ----------------------------------------------------


def valid_targets(system: ParticleSystem, p) -> list[AxialCoord]:
    u, v = p
    out = []
    for du, dv in DIRECTIONS:
        t = AxialCoord(u + du, v + dv)
        if t not in system and local_move_valid(system, p, t):
            out.append(t)
    return out


def _propose(system, p, kernel: Kernel, rng) -> AxialCoord | None:
    if kernel is Kernel.UNIFORM6:
        du, dv = DIRECTIONS[int(6 * rng.random())]
        t = AxialCoord(p[0] + du, p[1] + dv)
        if t in system or not local_move_valid(system, p, t):
            return None
        return t
    targets = valid_targets(system, p)
    if kernel is Kernel.UNIFORM_VALID:
        if not targets:
            return None
        return targets[int(len(targets) * rng.random())]
    j = int(max(2, len(targets)) * rng.random())
    return targets[j] if j < len(targets) else None


def compression_step(system: ParticleSystem, p, params: DynamicsParams, rng,
                     accept: np.ndarray | None = None) -> MoveProposal | None:
    """One Metropolis compression activation of the particle at ``p``.

    Applies the move in place and returns it, or returns ``None``.
    """
    p = AxialCoord(*p)
    t = _propose(system, p, params.kernel, rng)
    if t is None:
        return None
    e = system.count_neighbors(p)
    e2 = system.count_neighbors(t, exclude=p)
    if accept is None:
        accept = params.acceptance_table()
    a = accept[e2 - e + 5]
    if a < 1.0 and not rng.random() < a:
        return None
    system.move(p, t)
    return MoveProposal(p, t, e, e2)


def phototax_step(system: ParticleSystem, p, params: DynamicsParams,
                  light: LightField | None, rng,
                  accept: np.ndarray | None = None) -> MoveProposal | None:
    """Lit particles run compression; shadowed ones only with ``dim_prob``."""
    if not is_lit(system, p, light) and not rng.random() < params.dim_prob:
        return None
    return compression_step(system, p, params, rng, accept)


def mc_iteration(system: ParticleSystem, params: DynamicsParams,
                 light: LightField | None, rng,
                 accept: np.ndarray | None = None) -> MoveProposal | None:
    """Activate one uniformly random particle."""
    p = system.positions[int(system.n * rng.random())]
    if params.mode is Mode.PHOTOTAX:
        return phototax_step(system, p, params, light, rng, accept)
    return compression_step(system, p, params, rng, accept)


# --- literal small-system algorithms ---------------------------------------


def specialized_outcomes(system: ParticleSystem, p, params: DynamicsParams,
                         light: LightField | None = None) -> list[tuple[Fraction, AxialCoord]]:
    """Exact move distribution of the two- and three-particle algorithms.

    Each valid location gets probability 1/2, divided by lambda when the
    move loses an edge and by ``1/dim_prob`` when ``p`` is in shadow.
    """
    if system.n not in (2, 3):
        raise ValueError(f"specialised algorithm needs 2 or 3 particles, got {system.n}")
    p = AxialCoord(*p)
    lam = Fraction(params.lam)
    lit = is_lit(system, p, light)
    out = []
    for t in valid_targets(system, p):
        prob = Fraction(1, 2)
        before = system.edges
        after = before - system.count_neighbors(p) + system.count_neighbors(t, exclude=p)
        if after < before:
            prob /= lam
        if not lit:
            prob *= params.dim_prob
        out.append((prob, t))
    return out


def _sample_outcome(system, p, outcomes, rng):
    r = rng.random()
    acc = 0.0
    for prob, t in outcomes:
        acc += float(prob)
        if r < acc:
            system.move(p, t)
            return t
    return None


def two_particle_step(system: ParticleSystem, p, params: DynamicsParams,
                      light: LightField | None, rng) -> AxialCoord | None:
    """Two particles: hop to one of the two shared neighbours, 1/4 as often in shadow."""
    if system.n != 2:
        raise ValueError(f"two_particle_step needs 2 particles, got {system.n}")
    return _sample_outcome(system, p, specialized_outcomes(system, p, params, light), rng)


def three_particle_step(system: ParticleSystem, p, params: DynamicsParams,
                        light: LightField | None, rng) -> AxialCoord | None:
    if system.n != 3:
        raise ValueError(f"three_particle_step needs 3 particles, got {system.n}")
    return _sample_outcome(system, p, specialized_outcomes(system, p, params, light), rng)


# --- runs ------------------------------------------------------------------


@dataclass
class Trajectory:
    """Observables of one run, sampled on a grid of iterations.

    ``sum_u`` and ``sum_2y`` are the exact integer sums of the particles'
    columns and doubled heights, from which the centroid is derived.
    """

    n: int
    t: np.ndarray
    sum_u: np.ndarray
    sum_2y: np.ndarray
    edges: np.ndarray
    lit_count: np.ndarray
    meta: dict = field(default_factory=dict)
    final: ParticleSystem | None = None
    snapshots: dict = field(default_factory=dict)

    @property
    def centroid_x(self) -> np.ndarray:
        return self.sum_u * (SQRT3_2 / self.n)

    @property
    def centroid_y(self) -> list[Fraction]:
        return [Fraction(int(s), 2 * self.n) for s in self.sum_2y]

    @property
    def x(self) -> np.ndarray:
        return self.centroid_x

    @property
    def y(self) -> np.ndarray:
        return self.sum_2y / (2.0 * self.n)

    def __len__(self) -> int:
        return len(self.t)


def observe(system: ParticleSystem, light: LightField | None = None) -> tuple[int, int, int, int]:
    """(sum of columns, sum of doubled heights, edges, lit count)."""
    su = sum(c[0] for c in system)
    s2y = sum(twice_height(c) for c in system)
    if light is not None and not light.enabled:
        lit = system.n
    else:
        lit = len({c[0] for c in system})
    return su, s2y, system.edges, lit


def record_times(iterations: int, record_interval: int) -> list[int]:
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    if record_interval < 1:
        raise ValueError("record_interval must be at least 1")
    times = list(range(0, iterations + 1, record_interval))
    if times[-1] != iterations:
        times.append(iterations)
    return times


def run(initial: ParticleSystem, params: DynamicsParams, light: LightField | None,
        iterations: int, record_interval: int = 1, *, backend: str = "numba",
        snapshot_times: Sequence[int] = ()) -> Trajectory:
    """Run the chain for ``iterations`` activations from a copy of ``initial``.

    ``backend="python"`` uses the reference implementation in this module;
    ``"numba"`` the compiled kernel.  Both give identical trajectories.
    """
    if not is_connected(initial):
        raise ValueError("initial configuration is not connected")
    times = record_times(iterations, record_interval)
    wanted = sorted(set(times) | {s for s in snapshot_times if 0 <= s <= iterations})
    rng = np.random.default_rng(params.seed)
    meta = {"params": params, "seed": params.seed, "light": light,
            "iterations": iterations, "record_interval": record_interval}

    if backend == "python":
        system = initial.copy()
        accept = params.acceptance_table()

        def advance(steps):
            for _ in range(steps):
                mc_iteration(system, params, light, rng, accept)

        def state():
            return observe(system, light), system
    elif backend == "numba":
        from ._kernel import FastSystem

        fast = FastSystem(initial, params, light)

        def advance(steps):
            fast.advance(steps, rng)

        def state():
            return fast.observe(), fast
    else:
        raise ValueError(f"unknown backend {backend!r}")

    rows = []
    snaps = {}
    snapset = set(snapshot_times)
    now = 0
    for target in wanted:
        advance(target - now)
        now = target
        obs, holder = state()
        if target in times:
            rows.append((target,) + obs)
        if target in snapset:
            snaps[target] = _as_system(holder)
    arr = np.array(rows, dtype=np.int64).reshape(-1, 5)
    return Trajectory(
        n=initial.n, t=arr[:, 0], sum_u=arr[:, 1], sum_2y=arr[:, 2],
        edges=arr[:, 3], lit_count=arr[:, 4], meta=meta,
        final=_as_system(state()[1]), snapshots=snaps,
    )


def _as_system(holder) -> ParticleSystem:
    if isinstance(holder, ParticleSystem):
        return holder.copy()
    return holder.to_system()


RateSpec = Sequence[float] | Callable[[ParticleSystem, AxialCoord], float]


def light_rates(lit_rate: float, dim_rate: float, light: LightField | None = None) -> Callable:
    """Activation rate that depends on whether a particle senses light."""
    def rate(system, p):
        return lit_rate if is_lit(system, p, light) else dim_rate
    return rate


def poisson_run(initial: ParticleSystem, params: DynamicsParams, light: LightField | None,
                horizon: float, rates: RateSpec, record_interval: float | None = None,
                max_events: int | None = None) -> Trajectory:
    """Continuous-time execution with independent exponential clocks.

    ``rates`` is either one positive rate per particle index or a callable
    ``rate(system, position)`` re-evaluated before every event (e.g.
    :func:`light_rates`).  On each event the chosen particle executes
    :func:`mc_iteration`'s per-particle step for ``params.mode``.  Records
    are taken every ``record_interval`` time units (default: every event);
    ``t`` in the result holds the event count, real times are in
    ``meta["times"]``.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    if not is_connected(initial):
        raise ValueError("initial configuration is not connected")
    system = initial.copy()
    rng = np.random.default_rng(params.seed)
    accept = params.acceptance_table()
    if callable(rates):
        rate_of = rates
    else:
        fixed = [float(r) for r in rates]
        if len(fixed) != system.n:
            raise ValueError("need one rate per particle")
        rate_of = None
    step = phototax_step if params.mode is Mode.PHOTOTAX else None

    rows = [(0,) + observe(system, light)]
    times = [0.0]
    clock = 0.0
    events = 0
    next_record = record_interval if record_interval else 0.0
    while max_events is None or events < max_events:
        r = fixed if rate_of is None else [rate_of(system, p) for p in system.positions]
        if min(r) <= 0:
            raise ValueError("rates must be positive")
        total = sum(r)
        clock += rng.exponential(1.0 / total)
        if clock > horizon:
            break
        x = rng.random() * total
        i = 0
        while i < len(r) - 1 and x >= r[i]:
            x -= r[i]
            i += 1
        p = system.positions[i]
        if step is None:
            compression_step(system, p, params, rng, accept)
        else:
            step(system, p, params, light, rng, accept)
        events += 1
        if record_interval is None or clock >= next_record:
            rows.append((events,) + observe(system, light))
            times.append(clock)
            if record_interval:
                while next_record <= clock:
                    next_record += record_interval
    arr = np.array(rows, dtype=np.int64).reshape(-1, 5)
    return Trajectory(
        n=initial.n, t=arr[:, 0], sum_u=arr[:, 1], sum_2y=arr[:, 2],
        edges=arr[:, 3], lit_count=arr[:, 4],
        meta={"params": params, "times": np.array(times), "horizon": horizon},
        final=system,
    )


# --- initial shapes --------------------------------------------------------


def line(n: int) -> ParticleSystem:
    """``n`` particles along the 30-degree diagonal lattice axis."""
    if n < 1:
        raise ValueError("need at least one particle")
    return ParticleSystem((i, 0) for i in range(n))


def hexagon(r: int) -> ParticleSystem:
    """Centred hexagonal patch of radius ``r`` (``3r(r+1) + 1`` particles)."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    cells = []
    for u in range(-r, r + 1):
        for v in range(-r, r + 1):
            if abs(u) <= r and abs(v) <= r and abs(u + v) <= r:
                cells.append((u, v))
    return ParticleSystem(cells)
