from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amoebot import io as aio
from amoebot.dynamics import DynamicsParams, Kernel, Mode, hexagon, line, run
from amoebot.light import LightField
from amoebot.metrics import msd, synthetic_random_walk
from amoebot.system import ParticleSystem
from conftest import grow_blob


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_snapshot_round_trip(n, seed):
    s = grow_blob(n, np.random.default_rng(seed), allow_holes=True)
    text = aio.format_snapshot(s)
    assert aio.parse_snapshot(text) == s
    assert aio.format_snapshot(aio.parse_snapshot(text)) == text


def test_snapshot_errors():
    with pytest.raises(ValueError):
        aio.parse_snapshot("0 0\n")
    with pytest.raises(ValueError):
        aio.parse_snapshot("n=2\n0 0\n")


def test_trajectory_csv_round_trip(tmp_path):
    tr = run(hexagon(2), DynamicsParams(seed=4), LightField(), 20_000, 1000)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    aio.write_trajectory_csv(a, tr)
    rec = aio.read_trajectory_csv(a)
    assert np.array_equal(rec.t, tr.t)
    assert rec.centroid_y == tr.centroid_y
    assert np.allclose(rec.x, tr.x, rtol=1e-11)
    assert np.array_equal(rec.edges, tr.edges)
    # same seed, same bytes
    aio.write_trajectory_csv(b, run(hexagon(2), DynamicsParams(seed=4), LightField(), 20_000, 1000))
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "t,centroid_x,centroid_y,edges,lit_count"


def test_trajectory_csv_rejects_bad_input(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("t,x\n0,1\n")
    with pytest.raises(ValueError):
        aio.read_trajectory_csv(p)
    p.write_text("t,centroid_x,centroid_y,edges,lit_count\n5,0,0/1,0,1\n5,0,0/1,0,1\n")
    with pytest.raises(ValueError):
        aio.read_trajectory_csv(p)


def test_msd_csv(tmp_path):
    res = msd(synthetic_random_walk(10, 100, 10, seed=0))
    p = tmp_path / "msd.csv"
    aio.write_msd_csv(p, res)
    lines = p.read_text().splitlines()
    assert lines[0] == "lag,msd" and len(lines) == len(res.lags) + 1
    assert aio.fit_summary(res).startswith("gamma=")


def test_config_parse_and_format():
    cfg = aio.parse_config("""
        # comment
        initial = line:12
        lambda = 3.5
        dim_prob = 1/3
        kernel = uniform_valid
        mode = compression
        light = off
        iterations = 1e5
        seed = 7
        trials = 3
    """)
    assert cfg.initial_system() == line(12)
    assert cfg.lam == 3.5 and cfg.dim_prob == Fraction(1, 3)
    assert cfg.kernel is Kernel.UNIFORM_VALID and cfg.mode is Mode.COMPRESSION_ONLY
    assert not cfg.light_enabled and cfg.iterations == 100_000
    assert [cfg.params(k).seed for k in range(3)] == [7, 8, 9]
    assert aio.parse_config(aio.format_config(cfg)) == cfg


@pytest.mark.parametrize("text,key", [
    ("lambda = -1", "lambda"),
    ("dim_prob = 2", "dim_prob"),
    ("kernel = magic", "kernel"),
    ("trials = 0", "trials"),
    ("iterations = -5", "iterations"),
    ("record_interval = 0", "record_interval"),
    ("initial = blob:3", "initial"),
    ("colour = red", "colour"),
    ("light = maybe", "light"),
    ("seed", "seed"),
])
def test_config_errors_name_the_key(text, key):
    with pytest.raises(aio.ConfigError) as exc:
        aio.parse_config(text)
    assert exc.value.key == key
    assert key in str(exc.value)


def test_disconnected_initial_file(tmp_path):
    p = tmp_path / "two.snap"
    aio.write_snapshot(p, ParticleSystem([(0, 0), (4, 4)]))
    with pytest.raises(aio.ConfigError) as exc:
        aio.parse_config(f"initial = file:{p}")
    assert exc.value.key == "initial"


def test_render_ascii():
    s = ParticleSystem([(0, 0), (0, 1), (1, 0)])
    pic = aio.render_ascii(s, LightField())
    assert pic.count("*") == 2 and pic.count("o") == 1
    assert aio.render_ascii(s, LightField(enabled=False)).count("*") == 3


def test_render_svg():
    s = hexagon(1)
    svg = aio.render_svg(s, LightField())
    assert svg.startswith("<svg") and svg.count("<circle") == 7
    assert svg.count('stroke="black"') == 3
    assert "polyline" in svg
    assert "polyline" not in aio.render_svg(s, LightField(enabled=False))
    assert len(aio.light_sources(s)) == 3 + 4
