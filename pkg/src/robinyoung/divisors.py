"""Factorization, sigma, divisor lists, and abundant-number generators.

Big inputs (the colossally abundant chain reaches ~10**28) are kept in
factored form; trial division is only attempted where it is provably
feasible, and anything harder raises FactorizationError rather than
risking a wrong answer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import isqrt

from mpmath import mp

from .errors import DomainError, FactorizationError, RangeError
from .numeric import DEFAULT_PRECISION, working_dps

log = logging.getLogger(__name__)

TRIAL_DIVISION_PRIME_BOUND = 10**7
SCAN_BOUND = 10**7
CA_CHAIN_LIMIT = 60
CA_PRIME_POOL = 100

# Bases giving a deterministic Miller-Rabin test below 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_PROVEN_LIMIT = 3_317_044_064_679_887_385_961_981


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer held as a prime -> exponent map."""

    factors: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for p, a in self.factors.items():
            if p < 2 or a < 1:
                raise ValueError(f"bad factor entry {p}^{a}")

    def value(self) -> int:
        n = 1
        for p, a in self.factors.items():
            n *= p**a
        return n

    def sigma(self) -> int:
        total = 1
        for p, a in self.factors.items():
            total *= (p ** (a + 1) - 1) // (p - 1)
        return total

    def divisor_count(self) -> int:
        count = 1
        for a in self.factors.values():
            count *= a + 1
        return count

    def divisors(self) -> list[int]:
        divs = [1]
        for p, a in sorted(self.factors.items()):
            powers = [p**e for e in range(a + 1)]
            divs = [d * q for d in divs for q in powers]
        return sorted(divs)

    def is_perfect_square(self) -> bool:
        return all(a % 2 == 0 for a in self.factors.values())

    def log_value(self, P: int = DEFAULT_PRECISION):
        """log n from the factored form: sum of a_p * log p."""
        with working_dps(P):
            return mp.fsum(a * mp.log(p) for p, a in self.factors.items())

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for p, a in sorted(self.factors.items()):
            parts.append(f"{p}^{a}" if a > 1 else f"{p}")
        return "*".join(parts)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; only valid below ~3.3e24 (raises beyond)."""
    if n >= _MR_PROVEN_LIMIT:
        raise FactorizationError(f"primality of {n} not provable with fixed bases")
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> FactoredInteger:
    """Exact factorization by trial division plus deterministic primality.

    Feasible when all prime factors are < 10**7 or n < 10**14; otherwise
    raises FactorizationError (never returns a wrong answer).
    """
    if n < 1:
        raise RangeError(f"factorize needs n >= 1, got {n}")
    factors: dict[int, int] = {}
    rem = n

    def strip(p):
        nonlocal rem
        a = 0
        while rem % p == 0:
            rem //= p
            a += 1
        if a:
            factors[p] = a

    for p in (2, 3, 5):
        strip(p)
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)  # steps between 7,11,13,17,19,23,29,31,37...
    w = 0
    while d * d <= rem and d < TRIAL_DIVISION_PRIME_BOUND:
        strip(d)
        d += wheel[w]
        w = (w + 1) % 8
    if rem > 1:
        if d * d > rem:
            factors[rem] = factors.get(rem, 0) + 1
        elif is_prime(rem):
            factors[rem] = factors.get(rem, 0) + 1
        else:
            raise FactorizationError(
                f"remaining cofactor {rem} has no prime factor below 10**7"
            )
    return FactoredInteger(factors)


def sigma(f: FactoredInteger) -> int:
    """Sum of divisors from the factored form."""
    return f.sigma()


def divisors_below_sqrt(f: FactoredInteger) -> list[int]:
    """Ascending divisors d of n with d*d < n; rejects perfect squares."""
    n = f.value()
    if f.is_perfect_square():
        raise DomainError(f"{n} is a perfect square; divisor pairing undefined")
    return [d for d in f.divisors() if d * d < n]


def _first_primes(count: int) -> list[int]:
    primes = []
    cand = 2
    while len(primes) < count:
        if all(cand % p for p in primes):
            primes.append(cand)
        cand += 1
    return primes


def ca_chain(count: int) -> list[FactoredInteger]:
    """Greedy colossally-abundant chain.

    From n = 1, repeatedly multiply by the prime p maximizing
    log(sigma(p^(a+1)) / sigma(p^a)) / log p over the current exponents a.
    Benefit ties (non-generic) resolve to the smaller prime and are logged.
    """
    if not 1 <= count <= CA_CHAIN_LIMIT:
        raise RangeError(f"ca_chain supports 1 <= count <= {CA_CHAIN_LIMIT}")
    primes = _first_primes(CA_PRIME_POOL)
    exponents: dict[int, int] = {}
    chain: list[FactoredInteger] = []
    with mp.workdps(60):
        tie_eps = mp.mpf(10) ** -40
        plogs = {p: mp.log(p) for p in primes}
        for _ in range(count):
            best_p, best_benefit = None, None
            for p in primes:
                a = exponents.get(p, 0)
                gain = mp.log(p ** (a + 2) - 1) - mp.log(p ** (a + 1) - 1)
                benefit = gain / plogs[p]
                if best_benefit is None or benefit > best_benefit + tie_eps:
                    best_p, best_benefit = p, benefit
                elif abs(benefit - best_benefit) <= tie_eps:
                    log.info("benefit tie between %d and %d; keeping %d", best_p, p, best_p)
            exponents[best_p] = exponents.get(best_p, 0) + 1
            chain.append(FactoredInteger(dict(exponents)))
    return chain


def superabundant_scan(bound: int) -> list[int]:
    """Record-setters of sigma(n)/n up to bound, exact comparisons."""
    if not 1 <= bound <= SCAN_BOUND:
        raise RangeError(f"superabundant_scan supports bound <= {SCAN_BOUND}")
    from . import _kernels

    sieve = _kernels.sigma_sieve(bound)
    return [int(n) for n in _kernels.ratio_records(sieve)]


def highly_abundant_scan(bound: int) -> list[int]:
    """Record-setters of sigma(n) up to bound."""
    if not 1 <= bound <= SCAN_BOUND:
        raise RangeError(f"highly_abundant_scan supports bound <= {SCAN_BOUND}")
    from . import _kernels

    sieve = _kernels.sigma_sieve(bound)
    return [int(n) for n in _kernels.value_records(sieve)]


def sigma_range(bound: int):
    """sigma(n) for n = 0..bound as an int64 array (sieve-backed)."""
    if not 1 <= bound <= SCAN_BOUND:
        raise RangeError(f"sigma_range supports bound <= {SCAN_BOUND}")
    from . import _kernels

    return _kernels.sigma_sieve(bound)
