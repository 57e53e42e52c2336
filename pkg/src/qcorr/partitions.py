"""Integer and set partitions of the subsystem labels."""
from __future__ import annotations

import math
from typing import Iterator

from .correlation import SetPartition
from .errors import NoDecomposition, OutOfRange

MAX_INTEGER_N = 60
MAX_SET_N = 10

IntegerPartition = tuple[int, ...]


def iter_integer_partitions(n: int) -> Iterator[IntegerPartition]:
    """Partitions of ``n`` in descending lexicographic order.

    Zoghbi-Stojmenovic ZS1: the partition is kept as a non-increasing
    array whose trailing run of 1s is tracked separately, so each step
    touches only the last part larger than 1.
    """
    if n < 1:
        return
    x = [1] * (n + 1)
    x[1] = n
    m, h = 1, 1
    yield (n,)
    while x[1] != 1:
        if x[h] == 2:
            m += 1
            x[h] = 1
            h -= 1
        else:
            r = x[h] - 1
            t = m - h + 1
            x[h] = r
            while t >= r:
                h += 1
                x[h] = r
                t -= r
            if t == 0:
                m = h
            else:
                m = h + 1
                if t > 1:
                    h += 1
                    x[h] = t
        yield tuple(x[1:m + 1])


def enumerate_integer_partitions(n: int) -> list[IntegerPartition]:
    if not 1 <= n <= MAX_INTEGER_N:
        raise OutOfRange(f"integer partitions are enumerated for 1 <= n <= {MAX_INTEGER_N}, got {n}")
    return list(iter_integer_partitions(n))


def partition_count(n: int) -> int:
    """Exact ``p(n)`` by the part-size dynamic programme."""
    if n < 0:
        return 0
    ways = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            ways[total] += ways[total - part]
    return ways[n]


def hardy_ramanujan_estimate(n: int) -> float:
    """Leading asymptotic ``exp(pi sqrt(2n/3)) / (4 n sqrt(3))`` for ``p(n)``."""
    if n < 1:
        raise OutOfRange(f"estimate defined for n >= 1, got {n}")
    return math.exp(math.pi * math.sqrt(2.0 * n / 3.0)) / (4.0 * n * math.sqrt(3.0))


def irreducible_decomposition(n: int) -> tuple[int, int]:
    """``(p, q)`` with ``2p + 3q == n``, using as many 3-blocks as possible."""
    if n < 2:
        raise NoDecomposition(f"{n} is not a sum of 2s and 3s")
    r = n % 3
    if r == 0:
        return 0, n // 3
    if r == 1:
        return 2, (n - 4) // 3
    return 1, (n - 2) // 3


def iter_set_partitions(n: int) -> Iterator[SetPartition]:
    """Set partitions of ``range(n)`` in lexicographic order of their
    restricted growth strings (block ``k`` opens before block ``k+1``)."""
    if n < 1:
        return
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i])
    while True:
        blocks: list[list[int]] = [[] for _ in range(max(a) + 1)]
        for i, blk in enumerate(a):
            blocks[blk].append(i)
        yield SetPartition(tuple(tuple(blk) for blk in blocks))
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = max(b[j - 1], a[j - 1] + 1)


def enumerate_set_partitions(n: int) -> list[SetPartition]:
    if not 1 <= n <= MAX_SET_N:
        raise OutOfRange(f"set partitions are enumerated for 1 <= n <= {MAX_SET_N}, got {n}")
    return list(iter_set_partitions(n))


def block_shape(partition: SetPartition) -> IntegerPartition:
    """Integer partition formed by the block sizes (what the asymptotic
    count counts; distinct labelled splits are set partitions)."""
    return tuple(sorted((len(b) for b in partition.blocks), reverse=True))
