"""One test per acceptance criterion; each prints a PASS/FAIL line.

The lines are also repeated in the pytest terminal summary.  Tolerances,
seeds and run lengths live in :mod:`amoebot.verify`.
"""

import pytest

from amoebot import verify

LINES: list[str] = []


def _check(fn):
    result = fn()
    line = result.line()
    LINES.append(line)
    print(line)
    assert result.passed, line


def test_criterion_1_two_particle_drift():
    _check(verify.two_particle_drift)


def test_criterion_2_three_particle_drift():
    _check(verify.three_particle_drift)


def test_criterion_3_stationary_gibbs():
    _check(verify.stationary_gibbs)


def test_criterion_4_simulation_matches_oracle():
    _check(verify.simulation_consistency)


@pytest.mark.slow
def test_criterion_5_phototax_at_scale():
    _check(verify.phototax_at_scale)


@pytest.mark.slow
def test_criterion_6_compression_at_scale():
    _check(verify.compression_at_scale)


def test_criterion_7_structural_safety():
    _check(verify.structural_safety)


@pytest.mark.slow
def test_criterion_8_msd():
    _check(verify.msd_machinery)


def test_criterion_9_specialization():
    _check(verify.specialization)
