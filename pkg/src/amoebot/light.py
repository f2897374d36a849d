"""Point light sources below the system, shining up the vertical lattice lines.

Only the lowest particle of each occupied column senses light; everything
above it in that column is in its shadow.  The sources themselves sit on a
jagged line at heights 0 and -1/2 below every particle and never interact
with the dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class LightField:
    enabled: bool = True
    # Fixed: rays travel in +v along constant u. Taxis toward the source is
    # obtained by flipping the reported axis, not by a second dynamics mode.
    direction: str = "up"

    def lit(self, system) -> set:
        return lit_particles(system, self)


def column_minima(system) -> dict[int, int]:
    low: dict[int, int] = {}
    for u, v in system:
        if u not in low or v < low[u]:
            low[u] = v
    return low


def lit_particles(system, light: LightField | None = None) -> set:
    """Coordinates of the particles that sense light."""
    if light is not None and not light.enabled:
        return set(system)
    return {(u, v) for u, v in column_minima(system).items()}


def is_lit(system, c, light: LightField | None = None) -> bool:
    if light is not None and not light.enabled:
        return True
    u, v = c
    return all(not (cu == u and cv < v) for cu, cv in system)
