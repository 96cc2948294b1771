"""Truncated Laurent-series arithmetic for constant-term extraction.

Constant terms such as <Q_1 ... Q_k Q_{k+1}^{-1}> need Q_{k+1}^{-1}, which is
not a Laurent polynomial in the seed.  It is expanded as a series around
its leading monomial for an integer weight on exponent vectors:

    f = L (1 - R),  f^{-1} = sum_j R^j L^{-1},

where every term of R has strictly negative weight.  Only terms of weight
at least some floor are kept, which is exact for those terms.

The weight used for constant terms puts zero weight on the Q_0 block and
orders the Q_1 block lexicographically by the partial sums
(c_1 + ... + c_r, c_2 + ... + c_r, ..., c_r): Q_1^{(b)} behaves like
z_1...z_b in the chamber |z_1| >> |z_2| >> ... (for A_1 this is just the
expansion in 1/Q_1).

Works for any element type providing ``max_weight``, ``leading_split``,
``truncate``, ``mul_truncated``, ``one`` and a unit-monomial ``** -1``.
"""

from __future__ import annotations

from typing import Sequence

from .errors import InvariantViolation

__all__ = ["chamber_weights", "series_inverse", "truncated_product"]


def chamber_weights(rank: int, spread: int, q0_block: bool = True) -> tuple[int, ...]:
    """Integer weights realising the partial-sum lex order on the Q_1 block.

    ``spread`` bounds the absolute value of any partial-sum coordinate
    difference that has to be resolved; the base N = 2*spread + 2 makes
    the weight order agree with the lex order on such vectors.
    """
    base = 2 * spread + 2
    w = [sum(base ** (rank - i) for i in range(1, b + 1)) for b in range(1, rank + 1)]
    return tuple(([0] * rank if q0_block else []) + w)


def series_inverse(f, weights: Sequence[int], floor: int):
    """Terms of f^{-1} with weight >= floor.

    The max-weight part of f must be a single monomial with a unit
    coefficient; otherwise the expansion is not defined by ``weights``.
    """
    lead, rest = f.leading_split(weights)
    if len(lead) != 1:
        raise InvariantViolation(f"leading part has {len(lead)} terms; weights do not separate it")
    try:
        lead_inv = lead ** -1
    except Exception as exc:  # non-unit coefficient
        raise InvariantViolation(f"leading coefficient is not a unit: {lead}") from exc
    top = f.max_weight(weights)
    inner_floor = floor + top
    r = -(lead_inv * rest)
    total = f.one()
    power = f.one()
    while True:
        power = power.mul_truncated(r, weights, inner_floor)
        if not power:
            break
        total = total + power
    return total.mul_truncated(lead_inv, weights, floor)


def _power(elem, k, weights, floor, top1):
    """elem**k (k >= 0) keeping what can still reach ``floor``; top1 = max weight of elem."""
    val = elem.one()
    for j in range(1, k + 1):
        val = val.mul_truncated(elem, weights, floor - (k - j) * top1)
    return val


def truncated_product(factors, weights: Sequence[int], floor: int):
    """Ordered product of ``(element, exponent)`` pairs, exact above ``floor``.

    Negative exponents are expanded with ``series_inverse``.
    """
    tops = [k * elem.max_weight(weights) for elem, k in factors]
    total_top = sum(tops)
    expanded = []
    for (elem, k), top in zip(factors, tops):
        need = floor - (total_top - top)
        w = elem.max_weight(weights)
        if k >= 0:
            val = _power(elem, k, weights, need, w)
        else:
            n = -k
            inv = series_inverse(elem, weights, need + (n - 1) * w)
            val = _power(inv, n, weights, need, -w)
        expanded.append(val.truncate(weights, need))
    remaining = total_top
    result = None
    for val, top in zip(expanded, tops):
        remaining -= top
        result = val if result is None else result.mul_truncated(val, weights, floor - remaining)
    return result
