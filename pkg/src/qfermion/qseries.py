"""Gaussian binomials in the bounded (M) and continued (N) conventions.

Both conventions come from the one finite product

    [p+m, m]_q = prod_{j=1..m} (1 - q^{p+j}) / (1 - q^j).

Why the product is the continued binomial for every integer p: the
Pochhammer ratio (q^{p+1};q)_inf (q^{m+1};q)_inf / ((q;q)_inf (q^{p+m+1};q)_inf)
telescopes, because (q^{p+1};q)_inf / (q^{p+m+1};q)_inf = prod_{j=1..m}(1-q^{p+j})
and (q^{m+1};q)_inf / (q;q)_inf = 1 / prod_{j=1..m}(1-q^j).  For
-m <= p <= -1 the factor j = -p is (1 - q^0) = 0.  For p < -m the
numerator is q^{s} times the denominator up to sign, with
s = sum_j (p+j) and sign (-1)^m, so the quotient is a signed monomial
times a Gaussian binomial in q^{-1}.  ``tests/test_qseries.py`` checks the
identity on truncated power series.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache

from .errors import DomainError, InvariantViolation
from .laurent import Laurent

__all__ = ["Convention", "q_binomial", "single_species_partition_function", "z_series_prefix"]


class Convention(str, Enum):
    M = "M"
    N = "N"


ONE = Laurent(1)
ZERO = Laurent(0)


@lru_cache(maxsize=None)
def _product_formula(p: int, m: int) -> Laurent:
    num = ONE
    den = ONE
    for j in range(1, m + 1):
        num = num * (ONE - Laurent.monomial(p + j))
        den = den * (ONE - Laurent.monomial(j))
    if not num:
        return ZERO
    quo, rem = num.divmod(den)
    if rem:
        raise InvariantViolation(f"q-binomial product for p={p}, m={m} is not a Laurent polynomial")
    return quo


def q_binomial(p: int, m: int, mode: Convention | str = Convention.M) -> Laurent:
    """The q-binomial [p+m choose m]_q.

    In M mode the value is 0 for p < 0; in N mode the product formula is
    used for every integer p.
    """
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    mode = Convention(mode)
    if m == 0:
        return ONE
    if p < 0 and mode is Convention.M:
        return ZERO
    return _product_formula(p, m)


def single_species_partition_function(p: int) -> Laurent:
    """Z_p(q) = sum_m q^{m(m+1)/2} [p+m choose m]_q over 0 <= m <= p.

    Here the single-species binomial keeps its own cutoff: it vanishes once
    m exceeds p, so the sum is finite.  As p grows the coefficients
    stabilise degree by degree to ``z_series_prefix``.
    """
    if p < 0:
        raise DomainError("p must be non-negative")
    total = ZERO
    for m in range(p + 1):
        total = total + q_binomial(p, m).shift(m * (m + 1) // 2)
    return total


def z_series_prefix(max_degree: int) -> list[int]:
    """First coefficients of sum_m q^{m(m+1)/2} / prod_{j<=m}(1-q^j)."""
    coeffs = [0] * (max_degree + 1)
    m = 0
    while m * (m + 1) // 2 <= max_degree:
        # expand 1/prod_{j<=m}(1-q^j) truncated: partitions into parts <= m
        series = [0] * (max_degree + 1)
        series[0] = 1
        for j in range(1, m + 1):
            for d in range(j, max_degree + 1):
                series[d] += series[d - j]
        shift = m * (m + 1) // 2
        for d in range(max_degree + 1 - shift):
            coeffs[d + shift] += series[d]
        m += 1
    return coeffs
