import numpy as np
import pytest

from amoebot.system import ParticleSystem, has_hole
from amoebot.lattice import neighbors


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def grow_blob(n, rng, allow_holes=False):
    """Random connected configuration grown cell by cell from the origin."""
    while True:
        cells = {(0, 0)}
        while len(cells) < n:
            frontier = sorted({nb for c in cells for nb in neighbors(c) if nb not in cells})
            cells.add(frontier[int(rng.integers(len(frontier)))])
        if allow_holes or not has_hole(cells):
            return ParticleSystem(cells)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
