from amoebot.dynamics import hexagon
from amoebot.light import LightField, column_minima, is_lit, lit_particles
from amoebot.system import ParticleSystem


def test_lowest_in_each_column_is_lit():
    s = ParticleSystem([(0, 0), (0, 1), (0, 2), (1, 0), (1, -3), (2, 5)])
    assert column_minima(s) == {0: 0, 1: -3, 2: 5}
    assert lit_particles(s) == {(0, 0), (1, -3), (2, 5)}
    assert is_lit(s, (0, 0)) and not is_lit(s, (0, 2)) and not is_lit(s, (1, 0))


def test_one_lit_particle_per_column():
    h = hexagon(5)
    assert len(lit_particles(h)) == 11
    assert all(is_lit(h, c) == (c in lit_particles(h)) for c in h)


def test_disabled_light_lights_everyone():
    h = hexagon(2)
    off = LightField(enabled=False)
    assert lit_particles(h, off) == set(h)
    assert all(is_lit(h, c, off) for c in h)
    assert off.lit(h) == set(h)
