import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amoebot.dynamics import hexagon, line
from amoebot.lattice import RING, neighbors
from amoebot.system import (VALIDITY, ParticleSystem, boundary_pairs, build_validity_table,
                            edge_count, edge_ring, has_hole, is_connected, local_move_valid,
                            mask_counts, ring_mask)
from amoebot.verify import symmetry_violations
from conftest import grow_blob


def test_rejects_empty_and_duplicates():
    with pytest.raises(ValueError):
        ParticleSystem([])
    with pytest.raises(ValueError):
        ParticleSystem([(0, 0), (0, 0)])


def test_edge_counts_of_known_shapes():
    assert edge_count(line(10)) == 9
    assert edge_count(ParticleSystem([(0, 0), (0, 1), (1, 0)])) == 3
    # hexagon of radius r: 3r(r+1)+1 particles, 9r^2+3r edges
    for r in range(4):
        h = hexagon(r)
        assert h.n == 3 * r * (r + 1) + 1
        assert h.edges == 9 * r * r + 3 * r


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_handshake(n, seed):
    s = grow_blob(n, np.random.default_rng(seed), allow_holes=True)
    assert 6 * s.n == 2 * s.edges + boundary_pairs(s)


def test_holes_and_connectivity():
    ring = ParticleSystem(neighbors((0, 0)))
    assert has_hole(ring)
    assert is_connected(ring)
    assert not has_hole(hexagon(2))
    assert not is_connected(ParticleSystem([(0, 0), (0, 2)]))


def test_incremental_edges():
    s = ParticleSystem([(0, 0), (0, 1), (1, 0)])
    s.move((1, 0), (1, 1))
    assert s.edges == edge_count(s) == 2
    with pytest.raises(ValueError):
        s.move((0, 0), (0, 1))


def test_line_interior_cannot_move():
    s = line(5)
    for p in list(s)[1:-1]:
        assert not any(local_move_valid(s, p, p + d) for d in RING)


def test_five_neighbour_particle_stays():
    # particle with five neighbours: leaving would open a hole
    cells = [(0, 0)] + neighbors((0, 0))[:5]
    s = ParticleSystem(cells)
    free = neighbors((0, 0))[5]
    assert not local_move_valid(s, (0, 0), free)
    after = ParticleSystem(cells[1:] + [free])
    assert has_hole(after)


def test_table_matches_reference(rng):
    assert np.array_equal(VALIDITY, build_validity_table())
    for _ in range(200):
        s = grow_blob(int(rng.integers(2, 25)), rng, allow_holes=True)
        for p in s:
            for k, d in enumerate(RING):
                t = p + d
                if t in s:
                    continue
                assert VALIDITY[k, ring_mask(s, p, k)] == local_move_valid(s, p, t)


def test_mask_counts():
    e, e2 = mask_counts(0b11111111)
    assert (e, e2) == (5, 5)
    assert mask_counts(0b00000001) == (1, 1)
    assert mask_counts(0b00000010) == (1, 0)
    assert mask_counts(0b00100000) == (0, 1)
    assert len(set(edge_ring(0))) == 8


def test_moves_are_reversible():
    assert symmetry_violations() == []


def test_random_valid_moves_keep_shape_sound(rng):
    for _ in range(30):
        s = grow_blob(int(rng.integers(3, 15)), rng)
        for _ in range(200):
            p = s.positions[int(rng.integers(s.n))]
            t = p + RING[int(rng.integers(6))]
            if t in s or not local_move_valid(s, p, t):
                continue
            s.move(p, t)
            assert is_connected(s)
            assert not has_hole(s)
            assert s.edges == edge_count(s)
