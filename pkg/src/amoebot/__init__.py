"""Phototaxing particle systems on the triangular lattice."""

from .dynamics import (DynamicsParams, Kernel, Mode, Trajectory, hexagon, line, poisson_run,
                       run)
from .lattice import AxialCoord
from .light import LightField, lit_particles
from .metrics import MsdResult, msd
from .system import ParticleSystem, has_hole, is_connected

__version__ = "0.1.0"

__all__ = [
    "AxialCoord", "DynamicsParams", "Kernel", "LightField", "Mode", "MsdResult",
    "ParticleSystem", "Trajectory", "has_hole", "hexagon", "is_connected", "line",
    "lit_particles", "msd", "poisson_run", "run",
]
