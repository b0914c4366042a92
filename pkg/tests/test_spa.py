import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import generator
from polar_aloha.packets import Packet
from polar_aloha.spa import (build_source_frame, info_packets_by_user, kernel_matrix,
                             kernel_row, read_spa_table, spa_f, spa_v, write_spa_table)


def test_kernel_rows_from_example():
    assert kernel_row(3, 8).bits == (1,) * 8
    assert kernel_row(3, 4).bits == (1, 1, 1, 1, 0, 0, 0, 0)
    assert kernel_row(3, 1).bits == (1, 0, 0, 0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        kernel_row(3, 9)


@pytest.mark.parametrize("n", range(0, 7))
def test_kernel_rows_match_kron(n):
    F = generator(1 << n)
    for row in range(1, (1 << n) + 1):
        pattern = kernel_row(n, row)
        assert pattern.bits == tuple(F[row - 1])
        # the popcount law: a row has 2^(ones in row-1) copies
        assert pattern.weight == 2 ** bin(row - 1).count("1")
    np.testing.assert_array_equal(kernel_matrix(n), F)


def test_spa_v_example():
    a = spa_v(4, 8, 0.5)
    assert a.info_set == {8, 7, 6, 4}
    assert a.row_of(4) == 8 and a.row_of(1) == 4
    assert a.pattern(4).bits == (1,) * 8
    assert a.pattern(1).slots == (1, 2, 3, 4)


def test_spa_v_edges():
    assert spa_v(1, 2, 0.3).row_of(1) == 2
    full = spa_v(8, 8, 0.4)
    assert full.info_set == frozenset(range(1, 9))
    assert sorted(p.row_index for p in full.patterns.values()) == list(range(1, 9))
    with pytest.raises(ValueError):
        spa_v(9, 8, 0.5)
    with pytest.raises(ValueError):
        spa_v(0, 8, 0.5)


def test_spa_f():
    order = spa_v(4, 8, 0.5).order
    assert spa_f(4, 8, order).patterns == spa_v(4, 8, 0.5).patterns
    ident = spa_f(2, 8, range(1, 9))
    assert (ident.row_of(1), ident.row_of(2)) == (2, 1)
    with pytest.raises(ValueError):
        spa_f(2, 4, (1, 2, 2, 4))
    mismatched = spa_f(5, 16, spa_v(16, 16, 0.2).order)
    assert mismatched.M == 5 and len(mismatched.info_set) == 5


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(1, 2 ** n), st.floats(0, 1))))
def test_spa_v_and_f_agree(args):
    n, M, eps = args
    a = spa_v(M, 2 ** n, eps)
    b = spa_f(M, 2 ** n, a.order)
    assert a.patterns == b.patterns and a.info_set == b.info_set
    for t, pattern in a.patterns.items():
        assert pattern == kernel_row(n, a.row_of(t))


def test_source_frame_example():
    a = spa_v(4, 8, 0.5)
    packets = [Packet(v, 4) for v in (1, 2, 3, 4)]
    frame = build_source_frame(packets, a)
    assert [frame[i - 1] for i in (8, 7, 6, 4)] == [packets[3], packets[2], packets[1], packets[0]]
    assert all(frame[i - 1] == Packet.zeros(4) for i in (1, 2, 3, 5))


def test_source_frame_full_rate_is_permutation():
    a = spa_v(4, 4, 0.5)
    packets = [Packet(v, 3) for v in (5, 6, 7, 1)]
    frame = build_source_frame(packets, a)
    assert sorted(p.value for p in frame) == sorted(p.value for p in packets)


def test_source_frame_errors():
    a = spa_v(2, 4, 0.5)
    with pytest.raises(ValueError):
        build_source_frame([Packet(1, 2)], a)
    with pytest.raises(ValueError):
        build_source_frame([Packet(1, 2), Packet(1, 3)], a)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(1, 2 ** n), st.floats(0, 1), st.integers(1, 16))), st.data())
def test_source_frame_extraction(args, data):
    n, M, eps, r = args
    a = spa_v(M, 2 ** n, eps)
    packets = [Packet(data.draw(st.integers(0, 2 ** r - 1)), r) for _ in range(M)]
    frame = build_source_frame(packets, a)
    assert info_packets_by_user(frame, a) == {t: p for t, p in enumerate(packets, start=1)}


def test_table_round_trip(tmp_path):
    path = tmp_path / "spa_64_0.1.csv"
    write_spa_table(path, 64, 0.1)
    N, eps, order = read_spa_table(path)
    assert (N, eps) == (64, 0.1)
    assert order == spa_v(64, 64, 0.1).order


def test_table_rejects_garbage(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("4,0.1\n1,2,3,3\n")
    with pytest.raises(ValueError):
        read_spa_table(path)
    path.write_text("4,x\n1,2,3,4\n")
    with pytest.raises(ValueError):
        read_spa_table(path)
