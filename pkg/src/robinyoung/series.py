"""The divisor-dominating series, its partition layers, and the hook-sum routes.

The headline object is A(n) = sum over k of a_k H_n^k / k! for a coefficient
family pinched between H_k - gamma (below) and log k + 1/k (above); the
canonical family a_k = log(k+1) sits inside the band and is exactly the
regrouping of exp(x_1 + ... + x_n) at x_i = 1/i by partition weight.  The
hook-shaped part of each layer is computed by three independent routes
 (brute-force monomials, a bordered Newton determinant, and permutation
log-moments) that the test suite plays against each other.

Exact mode represents log-weighted sums as LogCombination values: rational
coefficients attached to logs of integers.  Two routes that are equal as
numbers are then required to be equal coefficient-by-coefficient, which is
a far sharper check than any floating-point tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from mpmath import mp

from .combinat import partitions_of
from .cyclestats import cycle_distribution, log_moments_bulk
from .errors import DomainError, RangeError
from .numeric import (
    DEFAULT_PRECISION,
    euler_gamma,
    harmonic_hp,
    log_mpf,
    to_mpf,
    working_dps,
)
from .symfunc import (
    ElementaryTable,
    det_small,
    elementary_table,
    monomial_bruteforce,
    newton_rows,
    power_sum,
    unit_fraction_points,
)

FAMILIES = ("lower", "canonical", "upper")

DIRECT_N_LIMIT = 10
LAYER_R_LIMIT = 8


class LogCombination:
    """A finite sum of coeff * log(arg) with Fraction coefficients, int args.

    Arguments below 2 and zero coefficients are dropped, so two
    combinations are equal exactly when their coefficient maps are.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for arg, c in coeffs.items():
                if arg < 1:
                    raise ValueError(f"log argument must be >= 1, got {arg}")
                c = Fraction(c)
                if arg > 1 and c != 0:
                    clean[arg] = c
        self.coeffs = clean

    def __add__(self, other: "LogCombination") -> "LogCombination":
        out = dict(self.coeffs)
        for arg, c in other.coeffs.items():
            out[arg] = out.get(arg, Fraction(0)) + c
        return LogCombination(out)

    def __sub__(self, other: "LogCombination") -> "LogCombination":
        return self + (other * -1)

    def __mul__(self, scalar) -> "LogCombination":
        scalar = Fraction(scalar)
        return LogCombination({a: c * scalar for a, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "LogCombination":
        return self * (Fraction(1) / Fraction(scalar))

    def __eq__(self, other) -> bool:
        return isinstance(other, LogCombination) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, P: int = DEFAULT_PRECISION):
        with working_dps(P):
            return mp.fsum(to_mpf(c, P) * log_mpf(a, P) for a, c in sorted(self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "LogCombination(0)"
        terms = " + ".join(f"({c})*log{a}" for a, c in sorted(self.coeffs.items()))
        return f"LogCombination({terms})"


@dataclass(frozen=True)
class SeriesValue:
    """Truncated series value with a proven tail + rounding bound."""

    value: object  # mpf
    abs_error: object  # mpf
    truncation_index: int


def exp_integral_e1(x, P: int = DEFAULT_PRECISION):
    """E_1(x) for x > 0 by the alternating convergent series.

    Working precision grows with x to absorb the cancellation against e^x.
    """
    return _exp_integral(x, P, alternating=True)


def exp_integral_ei(x, P: int = DEFAULT_PRECISION):
    """Ei(x) for x > 0: gamma + log x + sum of x^k/(k*k!)."""
    return _exp_integral(x, P, alternating=False)


def _exp_integral(x, P: int, alternating: bool):
    with working_dps(P):
        xf = mp.mpf(x)
    if xf <= 0:
        raise DomainError(f"exponential integrals here need x > 0, got {x}")
    extra = int(float(xf) * 0.4343) + 10
    with working_dps(P, extra=extra):
        total = mp.mpf(0)
        term = mp.mpf(1)
        k = 0
        floor = mp.mpf(10) ** (-(mp.dps - 2))
        while True:
            k += 1
            term = term * xf / k
            piece = term / k
            total += -piece if (alternating and k % 2 == 0) else piece
            if k > xf and piece < floor:
                break
        if alternating:
            return +(-mp.euler - mp.log(xf) + total)
        return +(mp.euler + mp.log(xf) + total)


# Exact harmonic numbers H_0..H_k, extended on demand.
_H_EXACT: list[Fraction] = [Fraction(0)]


def harmonic_cached(k: int) -> Fraction:
    while len(_H_EXACT) <= k:
        i = len(_H_EXACT)
        _H_EXACT.append(_H_EXACT[i - 1] + Fraction(1, i))
    return _H_EXACT[k]


_COEFF_CACHE: dict[tuple[str, int], list] = {}


def family_coefficient(k: int, family: str, P: int = DEFAULT_PRECISION):
    """a_k for the lower/canonical/upper coefficient families.

    lower: H_k - gamma (so a_0 = -gamma); canonical: log(k+1) (a_0 = 0);
    upper: log k + 1/k for k >= 1 with a_0 = 0.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    with working_dps(P):
        key = (family, mp.prec)
        cache = _COEFF_CACHE.setdefault(key, [])
        while len(cache) <= k:
            i = len(cache)
            if family == "lower":
                cache.append(to_mpf(harmonic_cached(i), P) - mp.euler)
            elif family == "canonical":
                cache.append(log_mpf(i + 1, P))
            else:
                cache.append(mp.mpf(0) if i == 0 else log_mpf(i, P) + mp.mpf(1) / i)
        return cache[k]


def _series_from_h(h_value, family: str, P: int) -> SeriesValue:
    # h_value: mpf H_n at working precision; truncation K chosen so the
    # a_k <= k tail bound 2 H^(K+1)/K! drops below 10^(-P/2).
    with working_dps(P):
        target = mp.mpf(10) ** -(P // 2)
        kmin = max(2, int(mp.ceil(2 * mp.e * h_value)))
        # walk the term H^K/K! down from K = kmin; tail <= 2 H^(K+1)/K!
        t = h_value**kmin / mp.factorial(kmin)
        K = kmin
        while 2 * h_value * t >= target:
            K += 1
            t = t * h_value / K
        tail = 2 * h_value * t
        total = family_coefficient(0, family, P)
        term = mp.mpf(1)
        for k in range(1, K + 1):
            term = term * h_value / k
            total += family_coefficient(k, family, P) * term
        rounding = mp.mpf(10) ** (-(P + 8))
        return SeriesValue(+total, +(tail + rounding), K)


def divisor_bound_series(n: int, family: str, P: int = DEFAULT_PRECISION) -> SeriesValue:
    """A(n) under the chosen coefficient family, with a proven error bound."""
    if n < 1:
        raise RangeError(f"need n >= 1, got {n}")
    with working_dps(P):
        if n <= 10**6:
            h = to_mpf(harmonic_cached(n) if n <= 10**4 else _harmonic_big(n), P)
            return _series_from_h(h, family, P)
        hb = harmonic_hp(n, P)
        sv = _series_from_h(hb.value, family, P)
        # first-order sensitivity to the H_n error: dA/dH <= max a_k * e^H
        slack = hb.abs_error * mp.exp(hb.value) * (log_mpf(sv.truncation_index + 1, P) + 1)
        return SeriesValue(sv.value, sv.abs_error + slack, sv.truncation_index)


def _harmonic_big(n: int) -> Fraction:
    from .numeric import harmonic_exact

    return harmonic_exact(n)


def series_sweep(nmax: int, families, P: int = DEFAULT_PRECISION):
    """Yield (n, H_n exact, {family: SeriesValue}) for n = 1..nmax, sharing work."""
    h = Fraction(0)
    for n in range(1, nmax + 1):
        h += Fraction(1, n)
        hf = to_mpf(h, P)
        yield n, h, {fam: _series_from_h(hf, fam, P) for fam in families}


def lower_family_closed_form(n: int, P: int = DEFAULT_PRECISION):
    """e^{H_n} (log H_n + E_1(H_n)): the closed form of the lower-family series."""
    if n < 1:
        raise RangeError(f"need n >= 1, got {n}")
    with working_dps(P):
        h = harmonic_hp(n, P).value
        return +(mp.exp(h) * (mp.log(h) + exp_integral_e1(h, P)))


def lower_family_generating_sum(x, kmax: int, P: int = DEFAULT_PRECISION):
    """sum_{k=0..kmax} (H_k - gamma) x^k / k!, the lower-family generating sum."""
    with working_dps(P, extra=10):
        xf = mp.mpf(x)
        total = -mp.euler
        term = mp.mpf(1)
        for k in range(1, kmax + 1):
            term = term * xf / k
            total += (to_mpf(harmonic_cached(k), P + 10) - mp.euler) * term
        return +total


def harmonic_generating_sum(x, kmax: int, P: int = DEFAULT_PRECISION):
    """sum_{k=1..kmax} H_k x^k / k!; closed form e^x (log x + gamma + E_1(x))."""
    with working_dps(P, extra=10):
        xf = mp.mpf(x)
        total = mp.mpf(0)
        term = mp.mpf(1)
        for k in range(1, kmax + 1):
            term = term * xf / k
            total += to_mpf(harmonic_cached(k), P + 10) * term
        return +total


def hook_sum_r1(n: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """The r = 1 layer: sum of log(m+1) e_m(n); equals (n+1) E[log C_{n+1}]."""
    table = elementary_table(n, n, mode, P)
    return _hook_sum_r1_from(table, mode, P)


def _hook_sum_r1_from(table: ElementaryTable, mode: str, P: int):
    n = table.n
    if mode == "exact":
        return LogCombination({m + 1: table.e(m) for m in range(1, n + 1)})
    with working_dps(P, extra=10):
        top = min(n, len(table.values) - 1)
        return mp.fsum(log_mpf(m + 1, P + 10) * table.values[m] for m in range(1, top + 1))


def shifted_log_sum(r: int, j: int, n: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """Last-row entries of the bordered determinant.

    j = 1: sum of log(m+r) (m+r-1) e_{m+r-1}(n); j >= 2: sum of
    log(m+r) e_{m+r-j}(n); terms with e-index beyond n vanish.
    """
    table = elementary_table(n, n + r, mode, P)
    return _shifted_log_sum_from(table, r, j, mode, P)


def _shifted_log_sum_from(table: ElementaryTable, r: int, j: int, mode: str, P: int):
    if r < 2:
        raise RangeError(f"shifted log sums need r >= 2, got {r}")
    if not 1 <= j <= r:
        raise RangeError(f"need 1 <= j <= r, got j={j}")
    n = table.n
    if mode == "exact":
        out: dict[int, Fraction] = {}
        for m in range(1, n + 1):
            idx = m + r - 1 if j == 1 else m + r - j
            val = table.e(idx) if idx <= table.mmax else Fraction(0)
            if j == 1:
                val = val * (m + r - 1)
            if val:
                out[m + r] = out.get(m + r, Fraction(0)) + val
        return LogCombination(out)
    with working_dps(P, extra=10):
        total = mp.mpf(0)
        for m in range(1, n + 1):
            idx = m + r - 1 if j == 1 else m + r - j
            if idx >= len(table.values):
                continue
            val = table.values[idx]
            if j == 1:
                val = val * (m + r - 1)
            total += log_mpf(m + r, P + 10) * val
        return +total


def delta_correction(r: int, j: int, n: int, mode: str = "exact", P: int = DEFAULT_PRECISION,
                     table: ElementaryTable | None = None):
    """The finite corrections: shifted_log_sum = (n+1) E_j + delta_correction."""
    if r < 2:
        raise RangeError(f"need r >= 2, got {r}")
    if not 1 <= j <= r:
        raise RangeError(f"need 1 <= j <= r, got j={j}")
    if table is None:
        table = elementary_table(n, max(r, 4), mode, P)
    if mode == "exact":
        out: dict[int, Fraction] = {}
        if j == 1:
            for t in range(2, r + 1):
                out[t] = out.get(t, Fraction(0)) - table.e(t - 1) * (t - 1)
        else:
            for t in range(1, r - j + 2):
                arg = t + j - 1
                if arg > 1:
                    out[arg] = out.get(arg, Fraction(0)) - table.e(t - 1)
        return LogCombination(out)
    with working_dps(P, extra=10):
        total = mp.mpf(0)
        if j == 1:
            for t in range(2, r + 1):
                total -= log_mpf(t, P + 10) * table.e(t - 1) * (t - 1)
        else:
            for t in range(1, r - j + 2):
                if t + j - 1 > 1:
                    total -= log_mpf(t + j - 1, P + 10) * table.e(t - 1)
        return +total


def _bordered_det(table: ElementaryTable, r: int, last_row: list, mode: str, P: int):
    # Determinant with r-1 Newton rows on top and last_row below, expanded
    # along the last row so exact mode only needs rational minors.
    block = newton_rows(table, r - 1, r)
    total = LogCombination() if mode == "exact" else None
    if mode == "hp":
        with working_dps(P, extra=10):
            total = mp.mpf(0)
    for j in range(1, r + 1):
        minor_rows = [row[: j - 1] + row[j:] for row in block]
        minor = det_small(minor_rows) if r > 1 else 1
        sign = (-1) ** (r + j)
        total = total + last_row[j - 1] * (minor * sign)
    return total


def hook_sum_det(r: int, n: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """Hook-shape layer sum via the bordered Newton determinant, scaled by 1/r!."""
    if r < 2:
        raise RangeError(f"hook sums need r >= 2, got {r}")
    table = elementary_table(n, n + r, mode, P)
    return _hook_sum_det_from(table, r, mode, P)


def _hook_sum_det_from(table: ElementaryTable, r: int, mode: str, P: int):
    last = [_shifted_log_sum_from(table, r, j, mode, P) for j in range(1, r + 1)]
    det = _bordered_det(table, r, last, mode, P)
    if mode == "exact":
        return det * Fraction(1, factorial(r))
    with working_dps(P, extra=10):
        return +(det / factorial(r))


def delta_row_det(r: int, n: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """Bordered determinant with the correction row; identically zero."""
    if r < 2:
        raise RangeError(f"need r >= 2, got {r}")
    table = elementary_table(n, n + r, mode, P)
    last = [delta_correction(r, j, n, mode, P, table=table) for j in range(1, r + 1)]
    return _bordered_det(table, r, last, mode, P)


def hook_sum_moment(r: int, n: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """Hook-shape layer sum via permutation log-moments of C_{n+1}.

    (n+1)/r! times the alternating sum of p_{j-1}(n) E_j, j = 1..r.
    """
    if r < 2:
        raise RangeError(f"hook sums need r >= 2, got {r}")
    if mode == "exact":
        moments = _exact_log_moment_combs(n + 1, r)
        total = LogCombination()
        for j in range(1, r + 1):
            p = Fraction(1) if j == 1 else power_sum(n, j - 1, "exact")
            total = total + moments[j - 1] * (p * (-1) ** (r + j))
        return total * Fraction(n + 1, factorial(r))
    with working_dps(P, extra=10):
        moments = log_moments_bulk(n + 1, r, P)
        total = mp.mpf(0)
        for j in range(1, r + 1):
            p = mp.mpf(1) if j == 1 else power_sum(n, j - 1, "hp", P)
            total += (-1) ** (r + j) * p * moments[j - 1]
        return +(total * (n + 1) / factorial(r))


def _exact_log_moment_combs(n: int, jmax: int) -> list[LogCombination]:
    # E_1 = E[(C-1) log C]; E_j = E[log(C + j - 1)] for j >= 2, over C_n.
    dist = cycle_distribution(n, "exact")
    out = []
    for j in range(1, jmax + 1):
        if j == 1:
            out.append(LogCombination({k: (k - 1) * dist.probs[k - 1] for k in range(2, n + 1)}))
        else:
            out.append(LogCombination({k + j - 1: dist.probs[k - 1] for k in range(1, n + 1)}))
    return out


def hook_sum_direct(r: int, n: int) -> LogCombination:
    """Hook-shape layer sum by brute-force monomials (the oracle route)."""
    if r < 2:
        raise RangeError(f"hook sums need r >= 2, got {r}")
    if n > DIRECT_N_LIMIT:
        raise RangeError(f"brute-force route limited to n <= {DIRECT_N_LIMIT}")
    x = unit_fraction_points(n)
    out: dict[int, Fraction] = {}
    scale = Fraction(1, factorial(r))
    for l in range(0, n):
        m = monomial_bruteforce((r,) + (1,) * l, x)
        if m:
            out[l + r + 1] = m * scale
    return LogCombination(out)


def nonhook22_sum(n: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """The [2,2,1^l] correction layer: (1/4) sum of log(l+5) m_[2,2,1^l]."""
    if n < 2:
        raise RangeError(f"need n >= 2, got {n}")
    table = elementary_table(n, n + 4, mode, P)
    if mode == "exact":
        out: dict[int, Fraction] = {}
        for l in range(0, n - 1):
            val = _m221_from(table, l)
            if val:
                out[l + 5] = val * Fraction(1, 4)
        return LogCombination(out)
    with working_dps(P, extra=10):
        total = mp.mpf(0)
        for l in range(0, n - 1):
            total += log_mpf(l + 5, P + 10) * _m221_from(table, l)
        return +(total / 4)


def _m221_from(table: ElementaryTable, l: int):
    from .symfunc import m221_expansion

    return m221_expansion(l, table)


def partition_layer_sum(r: int, n: int) -> LogCombination:
    """Layer r of the partition expansion: sum over lengths of log(i+r) E_{i,i+r-1}.

    Enumerates every partition with weight minus length equal to r - 1,
    weighting m_mu by the inverse product of part factorials.
    """
    if not 1 <= r <= LAYER_R_LIMIT:
        raise RangeError(f"layers limited to 1 <= r <= {LAYER_R_LIMIT}")
    if n > DIRECT_N_LIMIT:
        raise RangeError(f"brute-force route limited to n <= {DIRECT_N_LIMIT}")
    x = unit_fraction_points(n)
    out: dict[int, Fraction] = {}
    for ell in range(1, n + 1):
        weight = ell + r - 1
        total = Fraction(0)
        for mu in partitions_of(weight, length=ell):
            denom = 1
            for part in mu:
                denom *= factorial(part)
            total += Fraction(monomial_bruteforce(mu, x)) / denom
        if total:
            out[ell + r] = total
    return LogCombination(out)


def assembled_series(n: int, rmax: int) -> LogCombination:
    """Partial series reassembled from partition layers 1..rmax."""
    if n > 8:
        raise RangeError(f"assembly limited to n <= 8, got {n}")
    if not 1 <= rmax <= LAYER_R_LIMIT:
        raise RangeError(f"need 1 <= rmax <= {LAYER_R_LIMIT}")
    total = LogCombination()
    for r in range(1, rmax + 1):
        total = total + partition_layer_sum(r, n)
    return total


def assembly_tail_bound(n: int, rmax: int, P: int = DEFAULT_PRECISION):
    """Bound on the layers dropped by assembled_series against the canonical series.

    Every partition in layer r > rmax has weight at least rmax + 1, so the
    missing mass is at most sum_{j > rmax} log(j+1) H_n^j / j!.
    """
    with working_dps(P):
        h = to_mpf(harmonic_cached(n), P)
        term = h**rmax / mp.factorial(rmax)
        total = mp.mpf(0)
        for j in range(rmax + 1, rmax + 400):
            term = term * h / j
            total += log_mpf(j + 1, P) * term
        return +total
