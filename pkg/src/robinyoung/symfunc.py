"""Symmetric polynomials at the unit fractions 1, 1/2, ..., 1/n.

Elementary values e_m(n) come from the add-one-variable recurrence
e_m(i) = e_m(i-1) + e_{m-1}(i-1)/i, either over exact rationals (n <= 200)
or high-precision floats (n <= 10**4).  Power sums, the determinant routes
to power-sum and hook-shaped monomial values, and a brute-force monomial
evaluator (the oracle for every determinant) live here too.

In hp mode, indices whose final magnitude provably stays below
10**-(2P+10) (via e_m(n) <= H_n^m / m!) are not carried; the recurrence
only feeds lower indices into higher ones, so carried entries are exact
up to rounding and the dropped tail is reported on the table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from mpmath import mp

from .combinat import Partition, partitions_of
from .errors import RangeError
from .numeric import DEFAULT_PRECISION, generalized_harmonic, working_dps

EXACT_N_LIMIT = 200
HP_N_LIMIT = 10**4


def _check_mode(mode: str, n: int):
    if mode == "exact":
        if n > EXACT_N_LIMIT:
            raise RangeError(f"exact mode supports n <= {EXACT_N_LIMIT}, got {n}")
    elif mode == "hp":
        if n > HP_N_LIMIT:
            raise RangeError(f"hp mode supports n <= {HP_N_LIMIT}, got {n}")
    else:
        raise ValueError(f"mode must be 'exact' or 'hp', got {mode!r}")


def index_cap(n: int, P: int) -> int:
    """Smallest M past the peak with H_n^M / M! below the hp drop threshold."""
    h = math.log(n) + 0.578 if n > 1 else 1.0
    target = -(2 * P + 10) * math.log(10.0)
    lg = 0.0
    m = 1
    while True:
        lg += math.log(h) - math.log(m)
        if lg < target and m > h:
            return m
        m += 1


@dataclass
class ElementaryTable:
    """Values e_0(n) .. e_mmax(n); e(m) answers 0 beyond n or below the hp cap."""

    n: int
    mmax: int
    mode: str
    P: int
    values: list
    tail_bound: object  # absolute bound on any dropped hp entry (0 in exact mode)

    def e(self, m: int):
        if m < 0:
            return self.values[0] * 0
        if m > self.mmax:
            raise RangeError(f"table built to mmax={self.mmax}, asked for e_{m}")
        if m >= len(self.values):
            return self.values[0] * 0
        return self.values[m]


def elementary_rows(nmax: int, mmax: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """Yield (i, values) for i = 1..nmax; values[m] = e_m(i), shared buffer."""
    _check_mode(mode, nmax)
    if mmax < 0:
        raise RangeError("mmax must be >= 0")
    cap = mmax if mode == "exact" else min(mmax, index_cap(nmax, P))
    if mode == "exact":
        one = Fraction(1)
        row = [one]
        for i in range(1, nmax + 1):
            top = min(i, cap)
            if len(row) <= top:
                row.append(Fraction(0))
            inv = Fraction(1, i)
            for m in range(top, 0, -1):
                row[m] = row[m] + row[m - 1] * inv
            yield i, row
    else:
        with working_dps(P, extra=10):
            one = mp.mpf(1)
            row = [one]
            for i in range(1, nmax + 1):
                top = min(i, cap)
                if len(row) <= top:
                    row.append(mp.mpf(0))
                inv = one / i
                for m in range(top, 0, -1):
                    row[m] = row[m] + row[m - 1] * inv
                yield i, row


def elementary_table(n: int, mmax: int, mode: str = "exact", P: int = DEFAULT_PRECISION) -> ElementaryTable:
    """Table of e_0(n)..e_mmax(n) in the requested arithmetic mode."""
    _check_mode(mode, n)
    values = None
    for _, row in elementary_rows(n, mmax, mode, P):
        values = row
    if values is None:  # n >= 1 always yields; keep e_0 for completeness
        values = [Fraction(1) if mode == "exact" else mp.mpf(1)]
    if mode == "exact":
        tail = Fraction(0)
    else:
        with working_dps(P, extra=10):
            cap = len(values) - 1
            h = mp.log(n) + 1 if n > 1 else mp.mpf(1)
            tail = h ** (cap + 1) / mp.factorial(cap + 1) if cap < min(n, mmax) else mp.mpf(0)
    return ElementaryTable(n=n, mmax=mmax, mode=mode, P=P, values=list(values), tail_bound=tail)


def power_sum(n: int, k: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """p_k at the unit fractions: sum of i**-k for i = 1..n."""
    if k < 1:
        raise RangeError(f"power_sum needs k >= 1, got {k}")
    if n < 1:
        raise RangeError(f"power_sum needs n >= 1, got {n}")
    _check_mode(mode, n)
    if mode == "exact":
        return generalized_harmonic(n, k)
    with working_dps(P):
        return mp.fsum(mp.mpf(1) / mp.mpf(i) ** k for i in range(1, n + 1))


def unit_fraction_points(n: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """The evaluation point (1, 1/2, ..., 1/n)."""
    if mode == "exact":
        return [Fraction(1, i) for i in range(1, n + 1)]
    with working_dps(P):
        return [mp.mpf(1) / i for i in range(1, n + 1)]


def monomial_bruteforce(mu: Partition, x):
    """m_mu(x) summed over distinct exponent placements.

    Groups equal parts and chooses an index set per distinct value, so the
    term count is the number of distinct monomials rather than n!.
    """
    mu = tuple(mu)
    n = len(x)
    if any(p < 1 for p in mu) or any(mu[i] < mu[i + 1] for i in range(len(mu) - 1)):
        raise ValueError(f"not a partition: {mu}")
    if sum(mu) > 20 or n > 12:
        raise RangeError("brute-force monomials limited to weight <= 20, n <= 12")
    if len(mu) > n:
        return 0
    if not mu:
        return 1
    groups = []
    for part in mu:
        if groups and groups[-1][0] == part:
            groups[-1][1] += 1
        else:
            groups.append([part, 1])

    def rec(gi: int, avail: tuple) -> object:
        if gi == len(groups):
            return 1
        value, count = groups[gi]
        total = 0
        for chosen in combinations(avail, count):
            prod = 1
            for idx in chosen:
                prod = prod * x[idx] ** value
            rest = tuple(i for i in avail if i not in chosen)
            total = total + prod * rec(gi + 1, rest)
        return total

    return rec(0, tuple(range(n)))


def det_small(rows) -> object:
    """Determinant by Gaussian elimination with partial pivoting.

    Exact over Fractions (pivot tests are exact); adequate for the small
    well-scaled hp matrices used here.
    """
    m = [list(r) for r in rows]
    k = len(m)
    if any(len(r) != k for r in m):
        raise ValueError("matrix must be square")
    sign = 1
    for col in range(k):
        piv = max(range(col, k), key=lambda r: abs(m[r][col]))
        if m[piv][col] == 0:
            return m[0][0] * 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        for r in range(col + 1, k):
            factor = m[r][col] / m[col][col]
            for c in range(col, k):
                m[r][c] = m[r][c] - factor * m[col][c]
    det = m[0][0]
    for i in range(1, k):
        det = det * m[i][i]
    return det * sign


def newton_rows(e: ElementaryTable, rows: int, cols: int) -> list[list]:
    """Rows i = 1..rows of the Newton matrix: [i*e_i, e_{i-1}, ..., e_{i-cols+1}].

    Entry e_0 is 1 (the unit superdiagonal) and negative indices are 0.
    """
    out = []
    for i in range(1, rows + 1):
        row = [e.e(i) * i]
        for j in range(2, cols + 1):
            row.append(e.e(i - j + 1) if i - j + 1 >= 0 else e.e(0) * 0)
        out.append(row)
    return out


def newton_p_det(e: ElementaryTable, k: int):
    """p_k recovered from the k x k Newton determinant in e-values."""
    if not 1 <= k <= e.mmax:
        raise RangeError(f"need 1 <= k <= mmax={e.mmax}, got {k}")
    return det_small(newton_rows(e, k, k))


def hook_monomial_det(r: int, l: int, e: ElementaryTable):
    """m_[r,1^l] from the r x r determinant; r >= 2 (r = 1 is e_{l+1} itself)."""
    if r < 2:
        raise RangeError("hook determinant needs r >= 2; use e_{l+1} for r = 1")
    if l < 0 or l + r > e.mmax:
        raise RangeError(f"need 0 <= l and l + r <= mmax={e.mmax}")
    rows = newton_rows(e, r - 1, r)
    last = [e.e(l + r) * (l + r)]
    for j in range(2, r + 1):
        last.append(e.e(l + r - j + 1))
    rows.append(last)
    return det_small(rows)


def m221_expansion(l: int, e: ElementaryTable):
    """m_[2,2,1^l] via its elementary-polynomial expansion."""
    if l < 0 or l + 4 > e.mmax:
        raise RangeError(f"need 0 <= l and l + 4 <= mmax={e.mmax}")
    head = e.e(l + 2) * e.e(2) - e.e(l + 3) * e.e(1) * (l + 2)
    return head + e.e(l + 4) * ((l + 1) * (l + 4)) / 2


def exp_layer(n: int, j: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """sum over partitions mu of j of m_mu(x) / prod(mu_t!) at x_i = 1/i.

    Equals H_n**j / j! (the multinomial regrouping of exp).
    """
    if n > 6 or j > 30:
        raise RangeError("exp layers limited to n <= 6, j <= 30")
    x = unit_fraction_points(n, mode, P)
    total = Fraction(0) if mode == "exact" else mp.mpf(0)
    for mu in partitions_of(j, max_length=n):
        denom = Fraction(1) if mode == "exact" else mp.mpf(1)
        for part in mu:
            denom = denom * math.factorial(part)
        total = total + monomial_bruteforce(mu, x) / denom
    return total


def exp_expansion_partial(n: int, J: int, mode: str = "exact", P: int = DEFAULT_PRECISION):
    """Partial exp(x_1 + ... + x_n) summed layer by layer through weight J."""
    if n > 6 or J > 30:
        raise RangeError("exp expansion limited to n <= 6, J <= 30")
    total = Fraction(1) if mode == "exact" else mp.mpf(1)  # the empty partition
    for j in range(1, J + 1):
        total = total + exp_layer(n, j, mode, P)
    return total
