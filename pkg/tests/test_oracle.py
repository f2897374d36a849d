from fractions import Fraction
from types import SimpleNamespace

import numpy as np
import pytest
import sympy

from amoebot import oracle
from amoebot.dynamics import Kernel, Mode
from amoebot.lattice import reflect
from amoebot.oracle import Symmetry, canonical_form, enumerate_states

# fixed polyhexes (vertex animals of the triangular lattice), OEIS A001207
FIXED_COUNTS = [1, 3, 11, 44, 186, 814]


@pytest.mark.parametrize("n", range(1, 7))
def test_fixed_animal_counts(n):
    assert len(enumerate_states(n, Symmetry.TRANSLATION)) == FIXED_COUNTS[n - 1]


def test_reflection_classes():
    assert len(enumerate_states(2)) == 2
    assert len(enumerate_states(3)) == 7
    with pytest.raises(ValueError):
        enumerate_states(7)


def test_canonical_form_invariance():
    cells = [(0, 0), (1, 0), (1, 1), (3, -1), (2, 0)]
    form = canonical_form(cells)
    assert canonical_form([(u + 4, v - 9) for u, v in cells]) == form
    assert canonical_form([reflect(c) for c in cells]) == form
    assert form[0] == (0, 0)


def _stub_states(m):
    return [SimpleNamespace(canonical=i) for i in range(m)]


def _random_chain(m, rng):
    p = rng.integers(0, 5, size=(m, m)).astype(object)
    for i in range(m):
        p[i, (i + 1) % m] += 1
    rows = [[Fraction(int(x), int(sum(r))) for x in r] for r in p]
    return oracle.TransitionMatrix(_stub_states(m), rows, [[Fraction(0)] * m] * m)


def test_gth_against_linear_solve(rng):
    for m in (2, 3, 5, 8):
        chain = _random_chain(m, rng)
        pi = oracle.stationary(chain)
        assert sum(pi) == 1
        for j in range(m):
            assert sum(pi[i] * chain.probs[i][j] for i in range(m)) == pi[j]
        p = np.array([[float(x) for x in row] for row in chain.probs])
        a = np.vstack([p.T - np.eye(m), np.ones(m)])
        b = np.zeros(m + 1)
        b[-1] = 1
        ref = np.linalg.lstsq(a, b, rcond=None)[0]
        assert np.allclose([float(x) for x in pi], ref, atol=1e-12)


def test_reducible_chain_raises():
    one, zero = Fraction(1), Fraction(0)
    chain = oracle.TransitionMatrix(_stub_states(2), [[one, zero], [zero, one]], [[zero] * 2] * 2)
    with pytest.raises(oracle.ReducibleChainError):
        oracle.stationary(chain)


@pytest.mark.parametrize("kernel", list(Kernel))
@pytest.mark.parametrize("n", [2, 3, 4])
def test_rows_are_stochastic_and_chain_irreducible(kernel, n):
    chain = oracle.build_chain(n, 4, kernel=kernel)
    assert all(s == 1 for s in chain.row_sums())
    assert oracle.is_irreducible(chain)


@pytest.mark.parametrize("lam", [Fraction(1), Fraction(7, 2), Fraction(4), Fraction(10)])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_compression_stationary_is_gibbs(lam, n):
    chain = oracle.build_chain(n, lam, kernel=Kernel.UNIFORM6, mode=Mode.COMPRESSION_ONLY,
                               symmetry=Symmetry.TRANSLATION)
    gibbs = oracle.gibbs_weights(chain)
    assert oracle.stationary(chain) == gibbs
    assert oracle.detailed_balance_violations(chain, gibbs) == []


def test_phototax_is_not_reversible_with_gibbs():
    chain = oracle.build_chain(3, 4, kernel=Kernel.UNIFORM6, symmetry=Symmetry.TRANSLATION)
    assert oracle.stationary(chain) != oracle.gibbs_weights(chain)


def test_light_off_phototax_equals_compression():
    a = oracle.build_chain(3, 4, kernel=Kernel.UNIFORM6, mode=Mode.PHOTOTAX, light_enabled=False)
    b = oracle.build_chain(3, 4, kernel=Kernel.UNIFORM6, mode=Mode.COMPRESSION_ONLY)
    assert a.probs == b.probs


def test_two_particle_values():
    chain = oracle.build_chain(2, 4, kernel=Kernel.UNIFORM_VALID)
    v = chain.index(((0, 0), (0, 1)))
    d = chain.index(((0, 0), (1, -1)))
    assert oracle.expected_drift(chain, v, 1) == Fraction(3, 32)
    assert oracle.expected_drift(chain, d, 1) == 0
    assert oracle.expected_drift(chain, v, 2) == Fraction(33, 256)
    assert oracle.expected_drift(chain, d, 2) == Fraction(3, 64)
    # both kernels coincide for two particles (always exactly two valid moves)
    assert oracle.build_chain(2, 4, kernel=Kernel.HALF_VALID).probs == chain.probs


def test_three_particle_labels_and_threshold():
    lam = sympy.Symbol("lam", positive=True)
    sym = oracle.build_chain(3, lam)
    at4 = oracle.build_chain(3, 4)
    labels = oracle.label_three_particle_states(at4)
    assert set(labels) == set("abcdefg")
    assert at4.states[labels["a"]].edges == 3
    assert at4.states[labels["f"]].canonical == ((0, 0), (0, 1), (0, 2))
    assert oracle.expected_drift(at4, labels["a"], 2) == Fraction(1, 256)
    thr = oracle.bound_threshold(sym)
    assert thr[labels["c"]] == pytest.approx(3.0) and thr[labels["d"]] == pytest.approx(3.0)
    assert max(thr.values()) == pytest.approx(3.0)
    below = oracle.build_chain(3, Fraction(5, 2))
    assert oracle.expected_drift(below, labels["c"], 3) < Fraction(1, 160)


def test_symbolic_and_rational_agree():
    lam = sympy.Symbol("lam", positive=True)
    sym = oracle.build_chain(3, lam, kernel=Kernel.UNIFORM6)
    num = oracle.build_chain(3, Fraction(9, 2), kernel=Kernel.UNIFORM6)
    for i in range(len(sym)):
        a = oracle.expected_drift(sym, i, 2).subs(lam, sympy.Rational(9, 2))
        assert sympy.Rational(a) == sympy.Rational(oracle.expected_drift(num, i, 2))


def test_report_mentions_everything():
    text = oracle.oracle_report(3, 4)
    assert "half_valid" in text and "uniform6" in text
    assert "detailed_balance_violations=0" in text
    assert text.count("\n") > 20
