import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import generator
from polar_aloha.channel import (SlotFrame, encode_frame, erase_words, polar_transform,
                                 sec_transmit, superpose)
from polar_aloha.packets import Packet
from polar_aloha.rng import erasure_uniforms, random_payloads
from polar_aloha.spa import build_source_frame, spa_v


def matrix_encode(words, N):
    G = generator(N)
    out = np.zeros(N, dtype=np.uint64)
    for m in range(N):
        for k in range(N):
            if G[m, k]:
                out[k] ^= np.uint64(words[m])
    return out


def test_two_slot_kernel():
    u1, u2 = Packet(0b01, 2), Packet(0b11, 2)
    frame = encode_frame([u1, u2])
    assert [s.to_packet() for s in frame.slots] == [u1 ^ u2, u2]


def test_zero_source():
    frame = encode_frame([Packet.zeros(5)] * 16)
    assert all(s.value == 0 and s.is_known for s in frame.slots)


def test_encode_errors():
    with pytest.raises(ValueError):
        encode_frame([Packet(0, 2)] * 3)
    with pytest.raises(ValueError):
        encode_frame([Packet(0, 2), Packet(0, 3)])
    with pytest.raises(ValueError):
        encode_frame([Packet(0, 2)] * 4, n=3)


@pytest.mark.parametrize("N", [2, 4, 8])
def test_transform_is_involution_exhaustive(N):
    r = 4 if N <= 4 else 2
    rng = np.random.default_rng(N)
    sources = (itertools.product(range(1 << r), repeat=N) if N <= 4
               else rng.integers(0, 1 << r, size=(4096, N)))
    u = np.array(list(sources), dtype=np.uint64)
    x = polar_transform(u)
    G = generator(N).astype(bool)
    expect = np.zeros_like(u)
    for m in range(N):
        expect[:, G[m]] ^= u[:, m:m + 1]
    np.testing.assert_array_equal(x, expect)
    np.testing.assert_array_equal(polar_transform(x), u)


@given(st.integers(0, 6).flatmap(lambda n: st.tuples(
    st.just(2 ** n), st.integers(1, 2 ** n), st.floats(0, 1), st.integers(1, 64))),
    st.integers(0, 2 ** 32))
def test_superposition_equals_matrix(args, seed):
    N, M, eps, r = args
    a = spa_v(M, N, eps)
    info = random_payloads(seed, 0, M, r)
    source = build_source_frame([Packet(int(v), r) for v in info], a)
    expect = encode_frame(source).words()[0]
    np.testing.assert_array_equal(superpose(info, a), expect)
    np.testing.assert_array_equal(superpose(info, a), matrix_encode([p.value for p in source], N))


@given(st.integers(0, 8), st.integers(1, 64), st.integers(0, 2 ** 32))
def test_bit_plane_separability(n, r, seed):
    words = random_payloads(seed, 1, 2 ** n, r)
    x = polar_transform(words)
    for w in range(r):
        plane = (words >> np.uint64(w)) & np.uint64(1)
        np.testing.assert_array_equal((x >> np.uint64(w)) & np.uint64(1), polar_transform(plane))


def test_sec_extremes():
    frame = encode_frame([Packet(v, 3) for v in range(8)])
    assert sec_transmit(frame, 0.0, seed=1) == frame
    gone = sec_transmit(frame, 1.0, seed=1)
    assert gone.erased_slots() == tuple(range(1, 9))
    with pytest.raises(ValueError):
        sec_transmit(frame, 1.2, seed=1)
    with pytest.raises(ValueError):
        sec_transmit(gone, 0.5, seed=1)


def test_sec_binomial_mean():
    N, eps, runs = 1024, 0.3, 400
    counts = [int((erasure_uniforms(7, t, N) < eps).sum()) for t in range(runs)]
    sigma = np.sqrt(N * eps * (1 - eps) / runs)
    assert abs(np.mean(counts) - 307.2) < 3 * sigma


def test_sec_is_slot_atomic_and_reproducible():
    frame = encode_frame([Packet(v, 6) for v in range(16)])
    a = sec_transmit(frame, 0.5, seed=3, trial=4)
    assert a.is_slot_atomic()
    assert a == sec_transmit(frame, 0.5, seed=3, trial=4)
    assert a != sec_transmit(frame, 0.5, seed=3, trial=5)


def test_erase_words():
    values = np.array([7, 5, 3], dtype=np.uint64)
    v, k = erase_words(values, np.array([False, True, False]), 3)
    assert v.tolist() == [7, 0, 3] and k.tolist() == [7, 0, 7]
    frame = SlotFrame.from_words(v, k, 3)
    assert frame.erased_slots() == (2,)
