import math
from fractions import Fraction

from hypothesis import given, strategies as st

from amoebot.lattice import (DIRECTIONS, RING, AxialCoord, are_adjacent, column, embed,
                             height, neighbors, reflect, twice_height)

coords = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


def test_six_unit_neighbours():
    assert len(set(DIRECTIONS)) == 6
    assert set(DIRECTIONS) == set(RING)
    for d in DIRECTIONS:
        x, y = embed(d)
        assert math.isclose(math.hypot(x, y), 1.0)


def test_ring_is_angular_order():
    angles = [math.degrees(math.atan2(*embed(d)[::-1])) % 360 for d in RING]
    assert [round(a) for a in angles] == [30, 90, 150, 210, 270, 330]
    for k in range(6):
        # two consecutive directions add to a vector of length sqrt(3)
        s = RING[k] + RING[(k + 1) % 6]
        assert math.isclose(math.hypot(*embed(s)), math.sqrt(3))


def test_vertical_axis_and_heights():
    assert height((0, 1)) == 1
    assert height((1, 0)) == Fraction(1, 2)
    assert height((1, -1)) == Fraction(-1, 2)
    assert column((3, -7)) == 3
    assert twice_height((3, -7)) == -11


@given(coords, coords)
def test_adjacency_is_unit_distance(a, b):
    pa, pb = embed(a), embed(b)
    assert are_adjacent(a, b) == math.isclose(math.dist(pa, pb), 1.0)


@given(coords)
def test_height_matches_embedding(c):
    assert math.isclose(float(height(c)), embed(c)[1], abs_tol=1e-12)


@given(coords)
def test_reflect(c):
    assert reflect(reflect(c)) == c
    assert height(reflect(c)) == height(c)
    x, y = embed(c)
    rx, ry = embed(reflect(c))
    assert math.isclose(rx, -x, abs_tol=1e-12)
    assert {reflect(n) for n in neighbors(c)} == set(neighbors(reflect(c)))


def test_axialcoord_arithmetic():
    assert AxialCoord(1, 2) + (3, 4) == (4, 6)
    assert AxialCoord(1, 2) - (3, 4) == (-2, -2)
    assert isinstance(AxialCoord(0, 0) + (1, 0), AxialCoord)
