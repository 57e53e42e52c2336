import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcorr.correlation import SetPartition
from qcorr.errors import NoDecomposition, OutOfRange
from qcorr.partitions import (block_shape, enumerate_integer_partitions, enumerate_set_partitions,
                              hardy_ramanujan_estimate, irreducible_decomposition, iter_integer_partitions,
                              partition_count)


def euler_partition_numbers(n_max):
    # generalised pentagonal number recurrence
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        k, total = 1, 0
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def bell_numbers(n_max):
    row, out = [1], [1]
    for _ in range(n_max):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        out.append(row[0])
    return out


def test_small_enumerations():
    assert enumerate_integer_partitions(1) == [(1,)]
    assert enumerate_integer_partitions(3) == [(3,), (2, 1), (1, 1, 1)]
    assert len(enumerate_integer_partitions(4)) == 5


def test_descending_lexicographic_order():
    parts = enumerate_integer_partitions(12)
    assert parts == sorted(parts, reverse=True)
    assert all(list(p) == sorted(p, reverse=True) and sum(p) == 12 for p in parts)
    assert len(set(parts)) == len(parts)


def test_counts_match_euler_recurrence():
    oracle = euler_partition_numbers(30)
    for n in range(1, 31):
        assert len(enumerate_integer_partitions(n)) == oracle[n]
        assert partition_count(n) == oracle[n]


def test_range_limits():
    for n in (0, 61):
        with pytest.raises(OutOfRange):
            enumerate_integer_partitions(n)
    with pytest.raises(OutOfRange):
        enumerate_set_partitions(11)


def test_hardy_ramanujan_values():
    assert abs(hardy_ramanujan_estimate(1) - math.exp(math.pi * math.sqrt(2 / 3)) / (4 * math.sqrt(3))) < 1e-15
    assert abs(hardy_ramanujan_estimate(1) - 1.88) < 0.01
    ratio = hardy_ramanujan_estimate(50) / 204226
    assert abs(ratio - 1.066) < 1e-3


def test_irreducible_decomposition():
    assert irreducible_decomposition(2) == (1, 0)
    assert irreducible_decomposition(6) == (0, 2)
    assert irreducible_decomposition(7) == (2, 1)
    with pytest.raises(NoDecomposition):
        irreducible_decomposition(1)


@given(st.integers(2, 500))
def test_irreducible_decomposition_maximises_triples(n):
    p, q = irreducible_decomposition(n)
    assert 2 * p + 3 * q == n and p >= 0 and q >= 0
    best = max(qq for qq in range(n // 3 + 1) if (n - 3 * qq) % 2 == 0)
    assert q == best


def test_set_partitions_small():
    assert [str(p) for p in enumerate_set_partitions(2)] == ["01", "0|1"]
    assert len(enumerate_set_partitions(3)) == 5
    assert len(enumerate_set_partitions(4)) == 15


def test_set_partition_counts_are_bell_numbers():
    oracle = bell_numbers(8)
    for n in range(1, 9):
        parts = enumerate_set_partitions(n)
        assert len(parts) == oracle[n]
        assert len(set(parts)) == len(parts)


def test_block_shape():
    assert block_shape(SetPartition.parse("0|12|3")) == (2, 1, 1)


def test_block_shapes_cover_integer_partitions():
    shapes = {block_shape(p) for p in enumerate_set_partitions(6)}
    assert shapes == set(iter_integer_partitions(6))
