import numpy as np
import pytest
from hypothesis import given, strategies as st

from polar_aloha.irsa import (CRDSA, DegreeDistribution, draw_placements, irsa_throughput,
                              irsa_trial, peel)
from polar_aloha.rng import IRSA_STREAM, stream


def test_distribution_parsing():
    d = DegreeDistribution.parse("2:0.5,3:0.28,8:0.22")
    assert d.max_degree == 8
    assert DegreeDistribution.parse(str(d)) == d
    for bad in ("2:0.5", "x", "0:1.0", "2:-0.5,3:1.5"):
        with pytest.raises(ValueError):
            DegreeDistribution.parse(bad)


def test_degree_above_n_rejected():
    with pytest.raises(ValueError):
        draw_placements(2, 4, DegreeDistribution({8: 1.0}), stream(0, 0, IRSA_STREAM))


def test_erase_everything():
    assert irsa_trial(5, 16, CRDSA, 1.0, seed=1) == 0
    assert irsa_throughput(5, 16, CRDSA, 1.0, trials=10, seed=1) == 0


def test_single_user_closed_form():
    trials, eps = 4000, 0.3
    recovered = [irsa_trial(1, 2, CRDSA, eps, seed=9, trial=t) for t in range(trials)]
    p = 1 - eps ** 2
    assert abs(np.mean(recovered) - p) < 3 * np.sqrt(p * (1 - p) / trials)


def test_two_users_two_slots_never_resolve():
    assert all(irsa_trial(2, 2, CRDSA, 0.0, seed=2, trial=t) == 0 for t in range(50))


def test_peel_hand_example():
    placements = [np.array([0, 1]), np.array([1, 2]), np.array([2, 3])]
    assert peel(placements, np.ones(4, dtype=bool)).all()
    usable = np.array([False, True, True, False])
    assert not peel(placements, usable).any()


@given(st.integers(1, 12), st.integers(2, 12), st.floats(0, 1), st.integers(0, 2 ** 32))
def test_peel_confluence(M, N, eps, seed):
    gen = np.random.default_rng(seed)
    placements = draw_placements(M, N, DegreeDistribution({2: 0.6, 3: 0.4}) if N >= 3 else CRDSA,
                                 gen)
    usable = gen.random(N) >= eps
    base = peel(placements, usable)
    for k in range(5):
        np.testing.assert_array_equal(peel(placements, usable, np.random.default_rng(k)), base)


@given(st.integers(1, 40), st.integers(0, 1000))
def test_monotone_in_epsilon(M, trial):
    counts = [irsa_trial(M, 32, CRDSA, eps, seed=5, trial=trial) for eps in (0.0, 0.1, 0.3, 0.6)]
    assert counts == sorted(counts, reverse=True)
