"""Triangular lattice geometry in axial coordinates.

One lattice axis is vertical.  A vertex ``(u, v)`` sits at

    x = u * sqrt(3) / 2,    y = v + u / 2

so every lattice edge has length 1, vertical neighbours differ in height by
1 and the four diagonal neighbours differ by 1/2.  Light travels up the
vertical lattice lines, i.e. along constant ``u``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

SQRT3_2 = math.sqrt(3.0) / 2.0


class AxialCoord(NamedTuple):
    u: int
    v: int

    def __add__(self, other):  # type: ignore[override]
        return AxialCoord(self.u + other[0], self.v + other[1])

    def __sub__(self, other):
        return AxialCoord(self.u - other[0], self.v - other[1])


#: Neighbour offsets in the documented order:
#: up, down, upper-right, lower-left, lower-right, upper-left.
DIRECTIONS: tuple[AxialCoord, ...] = (
    AxialCoord(0, 1),
    AxialCoord(0, -1),
    AxialCoord(1, 0),
    AxialCoord(-1, 0),
    AxialCoord(1, -1),
    AxialCoord(-1, 1),
)

#: The same six offsets in counter-clockwise angular order starting at 30 deg.
#: Consecutive entries are adjacent directions (they sum to the one between).
RING: tuple[AxialCoord, ...] = (
    AxialCoord(1, 0),
    AxialCoord(0, 1),
    AxialCoord(-1, 1),
    AxialCoord(-1, 0),
    AxialCoord(0, -1),
    AxialCoord(1, -1),
)


def neighbors(c) -> list[AxialCoord]:
    """The six neighbours of ``c`` in :data:`DIRECTIONS` order."""
    u, v = c
    return [AxialCoord(u + du, v + dv) for du, dv in DIRECTIONS]


def are_adjacent(a, b) -> bool:
    du = b[0] - a[0]
    dv = b[1] - a[1]
    return (du, dv) in _DIRECTION_SET


_DIRECTION_SET = frozenset(DIRECTIONS)


def height(c) -> Fraction:
    """Exact y-coordinate ``v + u/2`` of a vertex."""
    return Fraction(2 * c[1] + c[0], 2)


def twice_height(c) -> int:
    """``2 * height(c)`` as an integer; handy for integer-only hot paths."""
    return 2 * c[1] + c[0]


def column(c) -> int:
    """Index of the vertical lattice line (light ray) through ``c``."""
    return c[0]


def embed(c) -> tuple[float, float]:
    """Euclidean position of a vertex."""
    u, v = c
    return u * SQRT3_2, v + 0.5 * u


def reflect(c) -> AxialCoord:
    """Mirror image across the vertical axis ``x = 0``.

    Heights and columns-as-sets are preserved; neighbours map to neighbours.
    """
    u, v = c
    return AxialCoord(-u, v + u)
