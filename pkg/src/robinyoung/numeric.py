"""Exact and high-precision numeric kernels.

Exact arithmetic rides on Python ints and ``fractions.Fraction`` (both
arbitrary precision out of the box).  High-precision reals are mpmath
floats created at an explicit decimal-digit precision ``P`` (default 40);
every analytic routine takes ``P``, computes with guard digits, and
returns a value good to roughly ``10**-P``.  Comparisons of high-precision
values never use an implicit epsilon: callers state their tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import RangeError

BigInteger = int
ExactRational = Fraction

DEFAULT_PRECISION = 40

# Extra working digits layered on top of a caller's P.
GUARD_DIGITS = 15

# Above this, harmonic numbers switch from direct summation to Euler-Maclaurin.
HARMONIC_DIRECT_LIMIT = 10**6


def working_dps(P: int, extra: int = 0):
    """Context manager running mpmath at P plus guard digits."""
    return mp.workdps(P + GUARD_DIGITS + extra)


def to_mpf(x, P: int = DEFAULT_PRECISION):
    """Convert int/Fraction/float/str to an mpf at precision P."""
    with working_dps(P):
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        return mp.mpf(x)


def close_to(a, b, tol) -> bool:
    """Absolute comparison with an explicit tolerance."""
    return abs(mp.mpf(a) - mp.mpf(b)) <= mp.mpf(tol)


@dataclass(frozen=True)
class ErrorBounded:
    """A value together with a conservative absolute error bound."""

    value: object  # mpf
    abs_error: object  # mpf >= 0

    def upper(self):
        return self.value + self.abs_error

    def lower(self):
        return self.value - self.abs_error

    def __float__(self):
        return float(self.value)


def _harmonic_range(lo: int, hi: int, power: int = 1) -> tuple[int, int]:
    # Unreduced (num, den) for sum of 1/i**power, lo..hi, merged pairwise so
    # intermediate integers stay balanced.
    if hi - lo < 16:
        num, den = 0, 1
        for i in range(lo, hi + 1):
            ip = i**power
            num = num * ip + den
            den *= ip
        return num, den
    mid = (lo + hi) // 2
    n1, d1 = _harmonic_range(lo, mid, power)
    n2, d2 = _harmonic_range(mid + 1, hi, power)
    return n1 * d2 + n2 * d1, d1 * d2


def harmonic_exact(n: int) -> Fraction:
    """Exact harmonic number sum(1/i for i in 1..n)."""
    if not 1 <= n <= 10**6:
        raise RangeError(f"harmonic_exact feasible for 1 <= n <= 10**6, got {n}")
    return Fraction(*_harmonic_range(1, n))


def generalized_harmonic(n: int, ell: int) -> Fraction:
    """Exact sum(1/i**ell for i in 1..n); the power sum of 1, 1/2, ..., 1/n."""
    if not 1 <= n <= 10**4:
        raise RangeError(f"generalized_harmonic needs 1 <= n <= 10**4, got {n}")
    if not 1 <= ell <= 12:
        raise RangeError(f"generalized_harmonic needs 1 <= ell <= 12, got {ell}")
    return Fraction(*_harmonic_range(1, n, ell))


def euler_gamma(P: int = DEFAULT_PRECISION):
    """The Euler-Mascheroni constant to P digits."""
    if not 1 <= P <= 100:
        raise RangeError(f"euler_gamma supports 1 <= P <= 100, got {P}")
    with working_dps(P):
        return +mp.euler


def harmonic_hp(n: int, P: int = DEFAULT_PRECISION) -> ErrorBounded:
    """H_n as a high-precision float with a tracked absolute error bound.

    Sums directly up to 10**6; beyond that uses
    log n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4), whose truncation error
    is below 1/(252 n^6).  The bound also covers accumulated rounding.
    """
    if n < 1:
        raise RangeError(f"harmonic_hp needs n >= 1, got {n}")
    with working_dps(P):
        if n <= HARMONIC_DIRECT_LIMIT:
            total = mp.mpf(0)
            for i in range(1, n + 1):
                total += mp.mpf(1) / i
            # n rounded ops on values <= H_n; magnitudes stay below 15.
            rounding = mp.mpf(15) * n * mp.mpf(10) ** (-(P + GUARD_DIGITS) + 1)
            return ErrorBounded(total, rounding)
        nf = mp.mpf(n)
        value = (
            mp.log(nf)
            + mp.euler
            + 1 / (2 * nf)
            - 1 / (12 * nf**2)
            + 1 / (120 * nf**4)
        )
        truncation = 1 / (252 * nf**6)
        rounding = abs(value) * mp.mpf(10) ** (-(P + GUARD_DIGITS) + 2)
        return ErrorBounded(value, truncation + rounding)


def log_mpf(k: int, P: int = DEFAULT_PRECISION):
    """log k for a positive integer, memoized per working precision."""
    if k < 1:
        raise RangeError(f"log_mpf needs k >= 1, got {k}")
    with working_dps(P):
        key = (k, mp.prec)
        hit = _LOG_CACHE.get(key)
        if hit is None:
            hit = mp.log(k)
            _LOG_CACHE[key] = hit
        return hit


_LOG_CACHE: dict = {}
