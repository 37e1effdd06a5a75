"""Cycle-count statistics of uniform random permutations.

The count C_n is a sum of independent Bernoulli(1/i) variables, so its
distribution follows the convolution recurrence
P_i(k) = (1 - 1/i) P_{i-1}(k) + (1/i) P_{i-1}(k-1), carried exactly
(n <= 200) or in high precision (n <= 10**4, upper k-tail dropped once its
final mass provably sits below 10**-(2P+10)).  Cumulants come from the
Stirling-weighted power sums, central moments from complete Bell
polynomials, and the two asymptotic log-moment expansions are evaluated as
finite truncations with no convergence claim.  A seeded Monte Carlo sampler
mirrors the Bernoulli construction for validation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np
from mpmath import mp

from .combinat import complete_bell, stirling_second
from .errors import RangeError
from .numeric import DEFAULT_PRECISION, harmonic_hp, log_mpf, to_mpf, working_dps
from .symfunc import EXACT_N_LIMIT, HP_N_LIMIT, index_cap, power_sum

SAMPLE_LIMIT = 10**7
_ROWS_PER_BLOCK = 256
_COL_CHUNK = 16384


@dataclass
class CycleDistribution:
    """P(C_n = k) for k = 1..n; hp mode stores k = 1..kmax plus a tail bound."""

    n: int
    mode: str
    P: int
    probs: list  # probs[k-1] = P(C_n = k)
    tail_bound: object

    def prob(self, k: int):
        if k < 1 or k > self.n:
            return self.probs[0] * 0
        if k > len(self.probs):
            return self.probs[0] * 0
        return self.probs[k - 1]

    def kmax(self) -> int:
        return len(self.probs)


def cycle_distribution_rows(nmax: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """Yield (i, probs) for i = 1..nmax; probs[k-1] = P(C_i = k), shared buffer."""
    if mode == "exact":
        if nmax > EXACT_N_LIMIT:
            raise RangeError(f"exact mode supports n <= {EXACT_N_LIMIT}")
        row = [Fraction(1)]
        yield 1, row
        for i in range(2, nmax + 1):
            inv = Fraction(1, i)
            keep = Fraction(1) - inv
            row.append(Fraction(0))
            for k in range(len(row) - 1, 0, -1):
                row[k] = row[k] * keep + row[k - 1] * inv
            row[0] = row[0] * keep
            yield i, row
    elif mode == "hp":
        if nmax > HP_N_LIMIT:
            raise RangeError(f"hp mode supports n <= {HP_N_LIMIT}")
        cap = index_cap(nmax, P) + 1
        with working_dps(P, extra=10):
            one = mp.mpf(1)
            row = [one]
            yield 1, row
            for i in range(2, nmax + 1):
                inv = one / i
                keep = one - inv
                if len(row) < min(i, cap):
                    row.append(mp.mpf(0))
                for k in range(len(row) - 1, 0, -1):
                    row[k] = row[k] * keep + row[k - 1] * inv
                row[0] = row[0] * keep
                yield i, row
    else:
        raise ValueError(f"mode must be 'exact' or 'hp', got {mode!r}")


def cycle_distribution(n: int, mode: str = "exact", P: int = DEFAULT_PRECISION) -> CycleDistribution:
    """Distribution of the cycle count of a uniform random permutation of n."""
    if n < 1:
        raise RangeError(f"need n >= 1, got {n}")
    probs = None
    for _, row in cycle_distribution_rows(n, mode, P):
        probs = row
    if mode == "exact":
        tail = Fraction(0)
    else:
        with working_dps(P, extra=10):
            if len(probs) < n:
                h = mp.log(n) + 1
                tail = h ** len(probs) / mp.factorial(len(probs))
            else:
                tail = mp.mpf(0)
    return CycleDistribution(n=n, mode=mode, P=P, probs=list(probs), tail_bound=tail)


def log_moment(n: int, j: int, P: int = DEFAULT_PRECISION):
    """E[(C_n - 1) log C_n] for j = 1; E[log(C_n + j - 1)] for j >= 2.

    Evaluated from the (non-asymptotic) distribution, so n <= 10**4.
    """
    if j < 1:
        raise RangeError(f"need j >= 1, got {j}")
    dist = cycle_distribution(n, "hp", P)
    with working_dps(P, extra=10):
        total = mp.mpf(0)
        for k in range(1, dist.kmax() + 1):
            p = dist.probs[k - 1]
            if j == 1:
                total += p * (k - 1) * log_mpf(k, P + 10)
            else:
                total += p * log_mpf(k + j - 1, P + 10)
        return +total


def log_moments_bulk(n: int, jmax: int, P: int = DEFAULT_PRECISION) -> list:
    """[E_1, ..., E_jmax] for C_n from one distribution pass (hp mode)."""
    if jmax < 1:
        raise RangeError(f"need jmax >= 1, got {jmax}")
    dist = cycle_distribution(n, "hp", P)
    with working_dps(P, extra=10):
        out = []
        for j in range(1, jmax + 1):
            total = mp.mpf(0)
            for k in range(1, dist.kmax() + 1):
                p = dist.probs[k - 1]
                if j == 1:
                    total += p * (k - 1) * log_mpf(k, P + 10)
                else:
                    total += p * log_mpf(k + j - 1, P + 10)
            out.append(+total)
        return out


def expected_log_cycles(n: int, P: int = DEFAULT_PRECISION):
    """E[log C_n] from the distribution (distinct from the j-indexed moments)."""
    dist = cycle_distribution(n, "hp", P)
    with working_dps(P, extra=10):
        total = mp.mpf(0)
        for k in range(2, dist.kmax() + 1):
            total += dist.probs[k - 1] * log_mpf(k, P + 10)
        return +total


def cumulant(n: int, m: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """m-th cumulant of C_n via alternating Stirling-weighted power sums."""
    if not 1 <= m <= 12:
        raise RangeError(f"cumulant supports 1 <= m <= 12, got {m}")
    with working_dps(P):
        total = Fraction(0) if mode == "exact" else mp.mpf(0)
        for ell in range(1, m + 1):
            coeff = (-1) ** (ell - 1) * factorial(ell - 1) * stirling_second(m, ell)
            total = total + coeff * power_sum(n, ell, mode, P)
        return total if mode == "exact" else +total


def central_moment(n: int, m: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """m-th central moment: the complete Bell polynomial of (0, k_2, ..., k_m)."""
    if not 1 <= m <= 12:
        raise RangeError(f"central_moment supports 1 <= m <= 12, got {m}")
    zero = Fraction(0) if mode == "exact" else to_mpf(0, P)
    z = [zero] + [cumulant(n, i, mode, P) for i in range(2, m + 1)]
    with working_dps(P):
        result = complete_bell(z)
        return result if mode == "exact" else +result


def _power_sum_any(n: int, ell: int, P: int):
    # Power sum valid for arbitrary n: exact route when feasible, else
    # zeta minus an Euler-Maclaurin tail.
    if n <= HP_N_LIMIT:
        return to_mpf(power_sum(n, ell, "exact", P), P)
    if ell == 1:
        return harmonic_hp(n, P).value
    from .limits import zeta_int

    with working_dps(P):
        nf = mp.mpf(n)
        tail = nf ** (1 - ell) / (ell - 1) - nf ** (-ell) / 2 + ell * nf ** (-ell - 1) / 12
        return zeta_int(ell, P) - tail


def asymptotic_log_moment(n: int, a, M: int, P: int = DEFAULT_PRECISION):
    """Truncated expansion of E[log(C_n + a)] around log(H_n + a).

    log(H_n + a) + sum_{m=2..M} (-1)^(m-1)/m * mu_m / (H_n + a)^m; an
    asymptotic (not convergent) series, truncated at caller-chosen M.
    """
    if not 1 <= M <= 8:
        raise RangeError(f"truncation order must be 1..8, got {M}")
    with working_dps(P):
        h = harmonic_hp(n, P).value
        base = mp.log(h + a)
        if M < 2:
            return +base
        mus = _central_moments_any(n, M, P)
        corr = mp.mpf(0)
        for m in range(2, M + 1):
            corr += (-1) ** (m - 1) * mus[m] / (m * (h + a) ** m)
        return +(base + corr)


def asymptotic_c_log_c(n: int, M: int, P: int = DEFAULT_PRECISION):
    """Truncated expansion of E[C_n log C_n] around H_n log H_n."""
    if not 1 <= M <= 8:
        raise RangeError(f"truncation order must be 1..8, got {M}")
    with working_dps(P):
        h = harmonic_hp(n, P).value
        base = h * mp.log(h)
        if M < 2:
            return +base
        mus = _central_moments_any(n, M, P)
        corr = mp.mpf(0)
        for m in range(2, M + 1):
            corr += (-1) ** (m - 1) * mus[m] / (m * (m - 1) * h ** (m - 1))
        return +(base - corr)


def _central_moments_any(n: int, M: int, P: int) -> dict[int, object]:
    # mu_2..mu_M for arbitrary n, via cumulants over generalized power sums.
    kappas = {}
    with working_dps(P):
        for m in range(2, M + 1):
            total = mp.mpf(0)
            for ell in range(1, m + 1):
                coeff = (-1) ** (ell - 1) * factorial(ell - 1) * stirling_second(m, ell)
                total += coeff * _power_sum_any(n, ell, P)
            kappas[m] = total
        mus = {}
        for m in range(2, M + 1):
            z = [mp.mpf(0)] + [kappas[i] for i in range(2, m + 1)]
            mus[m] = complete_bell(z)
        return mus


@dataclass(frozen=True)
class SampleSummary:
    """Deterministic summary of a Monte Carlo cycle-count run."""

    n: int
    trials: int
    seed: int
    mean: float
    variance: float
    histogram: dict[int, int]


def _block_counts(n: int, seed: int, block: int, rows: int, thresh: np.ndarray) -> np.ndarray:
    from . import _kernels

    rng = np.random.Generator(np.random.Philox(key=np.array([seed, block], dtype=np.uint64)))
    counts = np.zeros(rows, dtype=np.int64)
    for start in range(0, n, _COL_CHUNK):
        width = min(_COL_CHUNK, n - start)
        u = rng.random((rows, width))
        _kernels.count_bernoulli(u, thresh[start : start + width], counts)
    return counts


def sample_cycle_count(n: int, trials: int, seed: int, workers: int = 1) -> SampleSummary:
    """Sample C_n as a sum of Bernoulli(1/i) draws, seeded and reproducible.

    Trials are cut into fixed-size blocks, each with its own counter-based
    stream keyed by (seed, block index); merges are integer sums, so the
    result is bit-identical for any worker count.
    """
    if not 1 <= n <= SAMPLE_LIMIT:
        raise RangeError(f"sampler supports 1 <= n <= {SAMPLE_LIMIT}")
    if not 1 <= trials <= SAMPLE_LIMIT:
        raise RangeError(f"sampler supports 1 <= trials <= {SAMPLE_LIMIT}")
    thresh = 1.0 / np.arange(1, n + 1, dtype=np.float64)
    blocks = []
    full, rem = divmod(trials, _ROWS_PER_BLOCK)
    for b in range(full):
        blocks.append((b, _ROWS_PER_BLOCK))
    if rem:
        blocks.append((full, rem))

    def run(spec):
        b, rows = spec
        return _block_counts(n, seed, b, rows, thresh)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(spec) for spec in blocks]

    total = 0
    total_sq = 0
    hist: dict[int, int] = {}
    for counts in results:
        total += int(counts.sum())
        total_sq += int((counts * counts).sum())
        binned = np.bincount(counts)
        for k in np.nonzero(binned)[0]:
            hist[int(k)] = hist.get(int(k), 0) + int(binned[k])
    mean = Fraction(total, trials)
    variance = Fraction(total_sq, trials) - mean * mean
    return SampleSummary(
        n=n,
        trials=trials,
        seed=seed,
        mean=float(mean),
        variance=float(variance),
        histogram=dict(sorted(hist.items())),
    )


def histogram_csv(summary: SampleSummary) -> str:
    """Histogram as 'k,count' CSV lines."""
    lines = ["k,count"]
    for k, c in summary.histogram.items():
        lines.append(f"{k},{c}")
    return "\n".join(lines) + "\n"
