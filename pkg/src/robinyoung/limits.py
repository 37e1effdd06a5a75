"""Integer zeta values and the limiting layer proportions.

Each hook layer contributes, in the large-n limit, a fixed proportion of
the threshold constant e^gamma: 1 for the first layer and, from r = 2 on,
(1/r!) [(-1)^r + sum_{j=3..r} (-1)^(r+j) zeta(j-1)].  Those proportions sum
to about 1.6359, strictly below e^gamma ~ 1.7811; the balance belongs to
the non-hook shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from mpmath import mp

from .errors import DomainError, RangeError
from .numeric import DEFAULT_PRECISION, working_dps

RHO_TABLE_LIMIT = 50


def zeta_int(k: int, P: int = DEFAULT_PRECISION):
    """zeta(k) for integer k >= 2 by direct summation with an
    Euler-Maclaurin tail whose first omitted term bounds the remainder."""
    if k < 2:
        raise DomainError(f"zeta_int needs k >= 2, got {k}")
    with working_dps(P, extra=10):
        target = mp.mpf(10) ** (-(P + 8))
        N = max(12, (P + 10) * 2 // 3)
        while True:
            total = mp.mpf(0)
            for i in range(1, N):
                total += mp.mpf(i) ** (-k)
            Nf = mp.mpf(N)
            total += Nf ** (1 - k) / (k - 1) + Nf ** (-k) / 2
            rising = mp.mpf(k)  # k (k+1) ... (k + 2j - 2), built incrementally
            power = Nf ** (-k - 1)
            term = None
            converged = False
            for j in range(1, 60):
                term = mp.bernoulli(2 * j) / mp.factorial(2 * j) * rising * Nf * power
                # rising currently = (k)^(2j-1); power = N^(-k-2j+1) after refresh
                total += term
                nxt_rising = rising * (k + 2 * j - 1) * (k + 2 * j)
                nxt_power = power / (Nf * Nf)
                nxt = mp.bernoulli(2 * j + 2) / mp.factorial(2 * j + 2) * nxt_rising * Nf * nxt_power
                if abs(nxt) < target:
                    converged = True
                    break
                if abs(nxt) > abs(term):
                    break  # asymptotic regime exhausted; enlarge N
                rising, power = nxt_rising, nxt_power
            if converged:
                return +total
            N *= 2


def limiting_proportion(r: int, P: int = DEFAULT_PRECISION):
    """rho_r, the limit of the hook layer share of n log log n.

    r = 1 is exactly 1; the alternating zeta formula applies from r = 2.
    """
    if r < 1:
        raise DomainError(f"need r >= 1, got {r}")
    with working_dps(P):
        if r == 1:
            return mp.mpf(1)
        total = mp.mpf((-1) ** r)
        for j in range(3, r + 1):
            total += (-1) ** (r + j) * zeta_int(j - 1, P)
        return +(total / factorial(r))


@dataclass(frozen=True)
class RhoTable:
    """Rows (r, rho_r, partial sum S_r)."""

    precision: int
    rows: tuple  # of (int, mpf, mpf)


def proportion_table(rmax: int, P: int = DEFAULT_PRECISION) -> RhoTable:
    """The first rmax proportions with running partial sums."""
    if not 1 <= rmax <= RHO_TABLE_LIMIT:
        raise RangeError(f"need 1 <= rmax <= {RHO_TABLE_LIMIT}, got {rmax}")
    with working_dps(P):
        rows = []
        partial = mp.mpf(0)
        for r in range(1, rmax + 1):
            rho = limiting_proportion(r, P)
            partial = partial + rho
            rows.append((r, rho, +partial))
        return RhoTable(precision=P, rows=tuple(rows))
