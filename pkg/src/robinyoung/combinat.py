"""Stirling numbers, complete Bell polynomials, and integer partitions.

Partitions are plain tuples of weakly decreasing positive ints; the
enumeration order is reverse lexicographic so goldens stay deterministic.
Stirling tables are cached row by row and grow lazily.
"""

from __future__ import annotations

from math import comb

from .errors import RangeError

Partition = tuple[int, ...]

STIRLING_FIRST_LIMIT = 300
STIRLING_SECOND_LIMIT = 30
PARTITION_WEIGHT_LIMIT = 40

# Row caches: _first[n][k] = signless c(n, k); _second[m][l] = S(m, l).
_first_rows: list[list[int]] = [[1]]
_second_rows: list[list[int]] = [[1]]


def stirling_first_unsigned(n: int, k: int) -> int:
    """Permutations of n elements with exactly k cycles."""
    if not 0 <= n <= STIRLING_FIRST_LIMIT:
        raise RangeError(f"stirling_first_unsigned exact mode needs 0 <= n <= {STIRLING_FIRST_LIMIT}")
    if k < 0:
        raise RangeError("cycle count k must be >= 0")
    if k > n:
        return 0
    while len(_first_rows) <= n:
        i = len(_first_rows)
        prev = _first_rows[i - 1]
        row = [0] * (i + 1)
        for j in range(1, i + 1):
            row[j] = prev[j - 1] + (i - 1) * (prev[j] if j < i else 0)
        _first_rows.append(row)
    return _first_rows[n][k]


def stirling_second(m: int, ell: int) -> int:
    """Set partitions of an m-element set into ell nonempty blocks."""
    if not 0 <= m <= STIRLING_SECOND_LIMIT:
        raise RangeError(f"stirling_second needs 0 <= m <= {STIRLING_SECOND_LIMIT}")
    if ell < 0:
        raise RangeError("block count must be >= 0")
    if ell > m:
        return 0
    while len(_second_rows) <= m:
        i = len(_second_rows)
        prev = _second_rows[i - 1]
        row = [0] * (i + 1)
        for j in range(1, i + 1):
            row[j] = prev[j - 1] + j * (prev[j] if j < i else 0)
        _second_rows.append(row)
    return _second_rows[m][ell]


def complete_bell(z) -> object:
    """Complete Bell polynomial B_m(z_1, ..., z_m) for m = len(z).

    Uses B_{m+1} = sum(C(m, i) * B_{m-i} * z_{i+1}); works over any ring
    with int multiplication (Fraction, mpf, int).  B_0() = 1.
    """
    z = list(z)
    m = len(z)
    if m > 12:
        raise RangeError(f"complete_bell supports m <= 12, got {m}")
    if m == 0:
        return 1
    bell = [1]
    for j in range(m):
        nxt = sum(comb(j, i) * bell[j - i] * z[i] for i in range(j + 1))
        bell.append(nxt)
    return bell[m]


def _gen_partitions(remaining: int, cap: int, prefix: list[int], max_len, exact_len):
    if remaining == 0:
        if exact_len is None or len(prefix) == exact_len:
            yield tuple(prefix)
        return
    if max_len is not None and len(prefix) >= max_len:
        return
    if exact_len is not None:
        slots = exact_len - len(prefix)
        # Each remaining slot takes at least 1; also cannot exceed cap per part.
        if slots <= 0 or remaining < slots or remaining > slots * cap:
            return
    for part in range(min(cap, remaining), 0, -1):
        prefix.append(part)
        yield from _gen_partitions(remaining - part, part, prefix, max_len, exact_len)
        prefix.pop()


def partitions_of(j: int, max_length: int | None = None, length: int | None = None):
    """All partitions of weight j, reverse lexicographic, largest part first.

    ``max_length`` bounds the part count; ``length`` pins it exactly.
    """
    if not 0 <= j <= PARTITION_WEIGHT_LIMIT:
        raise RangeError(f"partitions_of supports 0 <= j <= {PARTITION_WEIGHT_LIMIT}")
    if j == 0:
        if length in (None, 0):
            return [()]
        return []
    if length is not None and max_length is not None:
        raise ValueError("pass either max_length or length, not both")
    return list(_gen_partitions(j, j, [], max_length, length))


def partition_count(j: int) -> int:
    """p(j) by Euler's pentagonal-number recurrence (independent of the enumerator)."""
    if j < 0:
        raise RangeError("partition_count needs j >= 0")
    counts = [1] + [0] * j
    for m in range(1, j + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m and g2 > m:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= m:
                total += sign * counts[m - g1]
            if g2 <= m:
                total += sign * counts[m - g2]
            k += 1
        counts[m] = total
    return counts[j]
