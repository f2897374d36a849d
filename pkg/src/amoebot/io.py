"""File formats: snapshots, trajectory and MSD CSVs, run configs, rendering."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np

from .dynamics import DynamicsParams, Kernel, Mode, Trajectory, hexagon, line
from .lattice import SQRT3_2, embed, twice_height
from .light import LightField, lit_particles
from .system import ParticleSystem, is_connected

TRAJECTORY_COLUMNS = ("t", "centroid_x", "centroid_y", "edges", "lit_count")


class ConfigError(ValueError):
    """Invalid run configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


# --- snapshots -------------------------------------------------------------


def format_snapshot(system) -> str:
    coords = sorted((int(u), int(v)) for u, v in system)
    return f"n={len(coords)}\n" + "".join(f"{u} {v}\n" for u, v in coords)


def parse_snapshot(text: str) -> ParticleSystem:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("snapshot must start with 'n=<count>'")
    n = int(lines[0][2:])
    coords = [tuple(int(tok) for tok in ln.split()) for ln in lines[1:]]
    if len(coords) != n or any(len(c) != 2 for c in coords):
        raise ValueError(f"snapshot declares n={n} but lists {len(coords)} particles")
    return ParticleSystem(coords)


def write_snapshot(path, system) -> None:
    Path(path).write_text(format_snapshot(system))


def read_snapshot(path) -> ParticleSystem:
    return parse_snapshot(Path(path).read_text())


# --- trajectories ----------------------------------------------------------


def _fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def write_trajectory_csv(path, traj: Trajectory) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_COLUMNS)
        for t, x, y, e, lit in zip(traj.t, traj.centroid_x, traj.centroid_y, traj.edges, traj.lit_count):
            w.writerow((int(t), format(float(x), ".12g"), _fraction_str(y), int(e), int(lit)))


@dataclass
class TrajectoryRecord:
    """A trajectory read back from CSV (no particle count or configuration)."""

    t: np.ndarray
    centroid_x: np.ndarray
    centroid_y: list
    edges: np.ndarray
    lit_count: np.ndarray

    @property
    def x(self) -> np.ndarray:
        return self.centroid_x

    @property
    def y(self) -> np.ndarray:
        return np.array([float(v) for v in self.centroid_y])


def read_trajectory_csv(path) -> TrajectoryRecord:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != TRAJECTORY_COLUMNS:
        raise ValueError(f"{path}: expected header {','.join(TRAJECTORY_COLUMNS)}")
    body = rows[1:]
    t = np.array([int(r[0]) for r in body], dtype=np.int64)
    if np.any(np.diff(t) <= 0):
        raise ValueError(f"{path}: t is not strictly increasing")
    return TrajectoryRecord(
        t=t,
        centroid_x=np.array([float(r[1]) for r in body]),
        centroid_y=[Fraction(r[2]) for r in body],
        edges=np.array([int(r[3]) for r in body], dtype=np.int64),
        lit_count=np.array([int(r[4]) for r in body], dtype=np.int64),
    )


def write_msd_csv(path, result) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("lag", "msd"))
        for lag, m in zip(result.lags, result.msd):
            w.writerow((int(lag), format(float(m), ".12g")))


def fit_summary(result) -> str:
    a, b = result.fit_range
    return f"gamma={result.gamma:.6g} intercept={result.log_intercept:.6g} t_min={a} t_max={b}"


# --- run configuration -----------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    initial: str = "hexagon:5"
    lam: float = 4.0
    dim_prob: Fraction = Fraction(1, 4)
    kernel: Kernel = Kernel.UNIFORM6
    mode: Mode = Mode.PHOTOTAX
    light_enabled: bool = True
    iterations: int = 1_000_000
    record_interval: int = 10_000
    snapshot_interval: int = 0
    seed: int = 0
    trials: int = 1
    output_dir: str = "runs"

    def params(self, trial: int = 0) -> DynamicsParams:
        """Trial ``k`` uses seed ``seed + k``."""
        return DynamicsParams(lam=self.lam, dim_prob=self.dim_prob, kernel=self.kernel,
                              mode=self.mode, seed=self.seed + trial)

    def light(self) -> LightField:
        return LightField(enabled=self.light_enabled)

    def initial_system(self) -> ParticleSystem:
        return build_initial(self.initial)

    def snapshot_times(self) -> list[int]:
        if self.snapshot_interval <= 0:
            return []
        times = list(range(0, self.iterations + 1, self.snapshot_interval))
        if times[-1] != self.iterations:
            times.append(self.iterations)
        return times


#: Config-file key -> RunConfig field.
CONFIG_KEYS = {
    "initial": "initial", "lambda": "lam", "dim_prob": "dim_prob", "kernel": "kernel",
    "mode": "mode", "light": "light_enabled", "iterations": "iterations",
    "record_interval": "record_interval", "snapshot_interval": "snapshot_interval",
    "seed": "seed", "trials": "trials", "output_dir": "output_dir",
}


def build_initial(spec: str) -> ParticleSystem:
    """``line:<n>``, ``hexagon:<r>`` or ``file:<snapshot path>``."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "line":
            return line(int(arg))
        if kind == "hexagon":
            return hexagon(int(arg))
        if kind == "file":
            return read_snapshot(arg)
    except (ValueError, OSError) as exc:
        raise ConfigError("initial", str(exc)) from exc
    raise ConfigError("initial", f"unknown shape {spec!r} (use line:N, hexagon:R or file:PATH)")


def _convert(key: str, raw: str):
    name = CONFIG_KEYS[key]
    try:
        if name in ("iterations", "record_interval", "snapshot_interval", "seed", "trials"):
            return int(float(raw)) if "e" in raw.lower() else int(raw)
        if name == "lam":
            return float(raw)
        if name == "dim_prob":
            return Fraction(raw)
        if name == "kernel":
            return Kernel(raw.lower())
        if name == "mode":
            return Mode(raw.lower())
        if name == "light_enabled":
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from exc
    return raw


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        key, sep, raw = ln.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(key, "expected key = value")
        if key not in CONFIG_KEYS:
            raise ConfigError(key, "unknown key")
        values[key] = raw.strip()
    return apply_overrides(base or RunConfig(), values)


def apply_overrides(config: RunConfig, values: dict) -> RunConfig:
    changes = {CONFIG_KEYS[k]: _convert(k, str(v)) for k, v in values.items() if v is not None}
    return validate_config(replace(config, **changes))


def validate_config(config: RunConfig) -> RunConfig:
    if config.iterations < 0:
        raise ConfigError("iterations", "must be >= 0")
    if config.record_interval < 1:
        raise ConfigError("record_interval", "must be >= 1")
    if config.trials < 1:
        raise ConfigError("trials", "must be >= 1")
    if config.snapshot_interval < 0:
        raise ConfigError("snapshot_interval", "must be >= 0")
    if not config.lam > 0:
        raise ConfigError("lambda", "must be > 0")
    if not 0 < config.dim_prob <= 1:
        raise ConfigError("dim_prob", "must lie in (0, 1]")
    if not is_connected(config.initial_system()):
        raise ConfigError("initial", "configuration is not connected")
    return config


def format_config(config: RunConfig) -> str:
    inverse = {v: k for k, v in CONFIG_KEYS.items()}
    out = []
    for f in fields(config):
        v = getattr(config, f.name)
        if isinstance(v, (Kernel, Mode)):
            v = v.value
        elif isinstance(v, bool):
            v = "true" if v else "false"
        out.append(f"{inverse[f.name]} = {v}")
    return "\n".join(out) + "\n"


# --- rendering -------------------------------------------------------------


def render_ascii(system, light: LightField | None = None) -> str:
    """Text picture: ``*`` lit particle, ``o`` shadowed, ``.`` empty vertex.

    One row per half unit of height, one column per lattice column.
    """
    lit = lit_particles(system, light)
    cells = {(c[0], twice_height(c)): c for c in system}
    us = [c[0] for c in system]
    hs = [twice_height(c) for c in system]
    rows = []
    for h in range(max(hs), min(hs) - 1, -1):
        row = []
        for u in range(min(us), max(us) + 1):
            if (h - u) % 2:
                row.append(" ")
            elif (u, h) in cells:
                row.append("*" if cells[(u, h)] in lit else "o")
            else:
                row.append(".")
        rows.append("".join(row).rstrip())
    return "\n".join(rows) + "\n"


def light_sources(system, pad: int = 2) -> list[tuple[float, float]]:
    """Jagged row of source positions one lattice step below the lowest particle."""
    us = [c[0] for c in system]
    low = min(twice_height(c) for c in system)
    pts = []
    for u in range(min(us) - pad, max(us) + pad + 1):
        h = low - 2
        if (h - u) % 2:
            h -= 1
        pts.append((u * SQRT3_2, h / 2))
    return pts


def render_svg(system, light: LightField | None = None, scale: float = 20.0) -> str:
    """Particles as discs, lit ones outlined; light sources as a red jagged line."""
    light = light or LightField()
    lit = lit_particles(system, light)
    pos = {c: embed(c) for c in system}
    src = light_sources(system) if light.enabled else []
    xs = [p[0] for p in pos.values()] + [p[0] for p in src]
    ys = [p[1] for p in pos.values()] + [p[1] for p in src]
    x0, x1 = min(xs) - 1, max(xs) + 1
    y0, y1 = min(ys) - 1, max(ys) + 1
    w, h = (x1 - x0) * scale, (y1 - y0) * scale

    def px(x, y):
        return (x - x0) * scale, (y1 - y) * scale

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1f}" height="{h:.1f}" '
             f'viewBox="0 0 {w:.1f} {h:.1f}">']
    if src:
        pts = " ".join("{:.2f},{:.2f}".format(*px(x, y)) for x, y in src)
        parts.append(f'<polyline points="{pts}" fill="none" stroke="red" stroke-width="{0.12 * scale:.2f}"/>')
    r = 0.4 * scale
    for c, (x, y) in sorted(pos.items()):
        cx, cy = px(x, y)
        if c in lit and light.enabled:
            parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="#888" '
                         f'stroke="black" stroke-width="{0.1 * scale:.2f}"/>')
        else:
            parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="#888"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
