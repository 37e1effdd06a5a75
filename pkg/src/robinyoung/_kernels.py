"""Hot numeric kernels: divisor-sum sieve, record scans, Bernoulli counting.

Each kernel has a numba @njit build and a pure-numpy twin.  Selection is by
the ROBINYOUNG_PURE_NUMPY environment variable (set to 1 to force numpy) or
automatic when numba is unavailable.  Both paths produce bit-identical
integer results; record comparisons are done in exact int64 cross products,
never floats.  Everything else in the package is exact-rational or
arbitrary-precision work where a JIT cannot help.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("ROBINYOUNG_PURE_NUMPY", "").strip().lower()
USE_NUMBA = _flag not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False


def _sigma_sieve_loop(limit, out):
    for i in range(1, limit + 1):
        for j in range(i, limit + 1, i):
            out[j] += i


def sigma_sieve_numpy(limit: int) -> np.ndarray:
    """sigma(n) for n = 0..limit (index 0 unused), via strided adds."""
    out = np.zeros(limit + 1, dtype=np.int64)
    for i in range(1, limit + 1):
        out[i::i] += i
    return out


def _ratio_records_loop(sigma, records):
    # Strict records of sigma(n)/n, compared exactly: sigma[n]*bn > bs*n.
    count = 0
    bs = np.int64(0)
    bn = np.int64(1)
    for n in range(1, sigma.shape[0]):
        if sigma[n] * bn > bs * n:
            records[count] = n
            count += 1
            bs = sigma[n]
            bn = np.int64(n)
    return count


def ratio_records_numpy(sigma: np.ndarray) -> np.ndarray:
    """Strict records of sigma(n)/n via chunked exact int64 comparisons."""
    limit = sigma.shape[0] - 1
    ns = np.arange(limit + 1, dtype=np.int64)
    records = []
    bs, bn = np.int64(0), np.int64(1)
    chunk = 1 << 16
    pos = 1
    while pos <= limit:
        stop = min(pos + chunk, limit + 1)
        scan = pos
        while scan < stop:
            hits = np.nonzero(sigma[scan:stop] * bn > bs * ns[scan:stop])[0]
            if hits.size == 0:
                break
            n = scan + int(hits[0])
            records.append(n)
            bs, bn = sigma[n], np.int64(n)
            scan = n + 1
        pos = stop
    return np.array(records, dtype=np.int64)


def _value_records_loop(sigma, records):
    count = 0
    best = np.int64(-1)
    for n in range(1, sigma.shape[0]):
        if sigma[n] > best:
            records[count] = n
            count += 1
            best = sigma[n]
    return count


def value_records_numpy(sigma: np.ndarray) -> np.ndarray:
    """Strict records of sigma(n) via an exact integer running maximum."""
    vals = sigma[1:]
    cummax = np.maximum.accumulate(vals)
    prev = np.empty_like(cummax)
    prev[0] = -1
    prev[1:] = cummax[:-1]
    return np.nonzero(vals > prev)[0].astype(np.int64) + 1


def _count_bernoulli_loop(u, thresh, counts):
    rows, cols = u.shape
    for r in range(rows):
        c = 0
        for j in range(cols):
            if u[r, j] < thresh[j]:
                c += 1
        counts[r] += c


def count_bernoulli_numpy(u: np.ndarray, thresh: np.ndarray, counts: np.ndarray) -> None:
    """Add per-row success counts of u[r, j] < thresh[j] into counts."""
    counts += (u < thresh[None, :]).sum(axis=1)


if USE_NUMBA:
    _sigma_sieve_jit = njit(cache=True)(_sigma_sieve_loop)
    _ratio_records_jit = njit(cache=True)(_ratio_records_loop)
    _value_records_jit = njit(cache=True)(_value_records_loop)
    _count_bernoulli_jit = njit(cache=True)(_count_bernoulli_loop)

    def sigma_sieve_numba(limit: int) -> np.ndarray:
        out = np.zeros(limit + 1, dtype=np.int64)
        _sigma_sieve_jit(limit, out)
        return out

    def ratio_records_numba(sigma: np.ndarray) -> np.ndarray:
        records = np.empty(sigma.shape[0], dtype=np.int64)
        count = _ratio_records_jit(sigma, records)
        return records[:count].copy()

    def value_records_numba(sigma: np.ndarray) -> np.ndarray:
        records = np.empty(sigma.shape[0], dtype=np.int64)
        count = _value_records_jit(sigma, records)
        return records[:count].copy()

    def count_bernoulli_numba(u, thresh, counts) -> None:
        _count_bernoulli_jit(u, thresh, counts)

    sigma_sieve = sigma_sieve_numba
    ratio_records = ratio_records_numba
    value_records = value_records_numba
    count_bernoulli = count_bernoulli_numba
else:
    sigma_sieve = sigma_sieve_numpy
    ratio_records = ratio_records_numpy
    value_records = value_records_numpy
    count_bernoulli = count_bernoulli_numpy
