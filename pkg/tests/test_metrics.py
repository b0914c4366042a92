import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import erasure_probabilities, synthetic_mutual_information
from polar_aloha.metrics import (capacity_order, compute_metrics, polarization_fraction,
                                 sec_capacity)


def test_sec_capacity():
    assert sec_capacity(0.5, 8) == 4.0
    assert sec_capacity(0.0, 3) == 3
    assert sec_capacity(1.0, 3) == 0
    with pytest.raises(ValueError):
        sec_capacity(1.5, 1)


def test_one_step():
    m = compute_metrics(2, 0.5)
    assert tuple(m.I) == (0.25, 0.75)


def test_example_order_and_z():
    m = compute_metrics(8, 0.5)
    assert capacity_order(m) == (8, 7, 6, 4, 5, 3, 2, 1)
    assert [m.bhattacharyya(i) for i in (8, 7, 6, 4)] == [
        0.00390625, 0.12109375, 0.19140625, 0.31640625]


def test_small_orders():
    for eps in (0.1, 0.5, 0.9):
        assert capacity_order(compute_metrics(2, eps)) == (2, 1)
    m = compute_metrics(4, 0.5)
    assert capacity_order(m) == (4, 3, 2, 1)
    assert tuple(m.I) == (0.0625, 0.4375, 0.5625, 0.9375)


def test_ties_prefer_larger_index():
    assert capacity_order(compute_metrics(8, 0.0)) == (8, 7, 6, 5, 4, 3, 2, 1)


def test_bad_inputs():
    with pytest.raises(ValueError):
        compute_metrics(6, 0.5)
    with pytest.raises(ValueError):
        compute_metrics(8, -0.1)
    with pytest.raises(ValueError):
        compute_metrics(8, 0.5).capacity(9)


@pytest.mark.parametrize("N", [2, 4, 8])
@pytest.mark.parametrize("eps", [0.2, 0.5, 0.7])
def test_z_is_genie_erasure_probability(N, eps):
    np.testing.assert_allclose(compute_metrics(N, eps).Z, erasure_probabilities(N, eps),
                               rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("N,r", [(2, 1), (2, 2), (4, 1), (4, 2)])
def test_capacity_is_mutual_information(N, r):
    np.testing.assert_allclose(compute_metrics(N, 0.35, r).I,
                               synthetic_mutual_information(N, 0.35, r), atol=1e-9)


def test_polarization_fraction_pins():
    frac = {n: polarization_fraction(compute_metrics(2 ** n, 0.5), 0.1) for n in (0, 6, 10, 20)}
    assert frac[0] == 1.0
    assert frac[10] < frac[6]
    assert frac[6] == 0.3125
    assert frac[10] == 0.130859375
    assert frac[20] < 0.12
    assert frac[20] == pytest.approx(0.020139694213867188, rel=1e-12)


def test_polarization_fraction_non_increasing():
    values = [polarization_fraction(compute_metrics(2 ** n, 0.5), 0.1) for n in range(21)]
    # the count is coarse at tiny N: n=2 -> 3 goes up from 1/2 to 3/4
    assert values[2:4] == [0.5, 0.75]
    tail = values[3:]
    assert all(b <= a for a, b in zip(tail, tail[1:]))


def test_polarization_gamma_range():
    with pytest.raises(ValueError):
        polarization_fraction(compute_metrics(4, 0.5, 2), 1.0)


@given(st.integers(1, 10), st.floats(0, 1), st.integers(1, 64))
def test_identities(n, eps, r):
    m = compute_metrics(2 ** n, eps, r)
    one = compute_metrics(2 ** n, eps, 1)
    np.testing.assert_allclose(m.I + m.Z, r, rtol=1e-12)
    np.testing.assert_allclose(m.I, r * one.I, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(m.Z, r * one.Z, rtol=1e-12, atol=1e-12)
    assert m.I.sum() == pytest.approx(2 ** n * r * (1 - eps), rel=1e-9, abs=1e-9)


@given(st.integers(1, 10), st.floats(0, 1))
def test_one_step_conservation(n, eps):
    parent = compute_metrics(2 ** (n - 1), eps).I
    child = compute_metrics(2 ** n, eps).I
    np.testing.assert_allclose(child[0::2] + child[1::2], 2 * parent, rtol=1e-12, atol=1e-12)


def test_arrays_read_only():
    m = compute_metrics(4, 0.3)
    with pytest.raises(ValueError):
        m.I[0] = 1.0
