"""Truncated generating function over tensor products.

    G(q; z, y) = sum_{nu, lambda} q^{f_1(nu)} ch_z V(lambda) M_{nu,lambda}(q)
                 prod_{a,i} y_{a,i}^{nu_i^{(a)} - nu_{i+1}^{(a)}}

with f_1(nu) = 1/2 sum_i nu_i.C^{-1}.nu_i + sum_{a,b} C^{-1}_ab nu_1^{(b)}
(row sequences as in ``fermionic``).  The y-monomial of nu records how many
modules of each level it contains, so it determines nu.  f_1 is often
fractional; such terms are kept with their exact rational exponent and
flagged, never rounded.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .cartan import CartanData
from .charring import dimension
from .errors import ConfigurationError, DomainError
from .fermionic import full_partition_polynomial, graded_character, rows
from .laurent import Laurent
from .partitions import MultiPartition, partitions

__all__ = [
    "f1_exponent",
    "bounded_multipartitions",
    "GTerm",
    "GeneratingFunction",
    "generating_function_truncated",
    "FractionalExponentWarning",
]

log = logging.getLogger(__name__)


class FractionalExponentWarning(UserWarning):
    """q^{f_1(nu)} has a non-integral exponent."""


def f1_exponent(cartan: CartanData, nu) -> Fraction:
    nu = nu if isinstance(nu, MultiPartition) else MultiPartition.of(nu)
    r = cartan.rank
    inv = cartan.inverse
    nu_rows = [rows(c) for c in nu]
    depth = max((len(x) for x in nu_rows), default=0)
    f = Fraction(0)
    for i in range(depth):
        col = [nu_rows[a][i] if i < len(nu_rows[a]) else 0 for a in range(r)]
        f += Fraction(1, 2) * sum(col[a] * inv[a][b] * col[b] for a in range(r) for b in range(r))
    first = [x[0] if x else 0 for x in nu_rows]
    f += sum(inv[a][b] * first[b] for a in range(r) for b in range(r))
    return f


def y_monomial(nu: MultiPartition) -> tuple[tuple[int, int, int], ...]:
    """Sorted (a, i, exponent) triples, 1-based a and i, zero exponents dropped."""
    out = []
    for a, comp in enumerate(nu):
        rs = rows(comp)
        for i in range(len(rs)):
            e = rs[i] - (rs[i + 1] if i + 1 < len(rs) else 0)
            if e:
                out.append((a + 1, i + 1, e))
    return tuple(out)


def bounded_multipartitions(rank: int, max_boxes: int, max_rows: int) -> list[MultiPartition]:
    """Multipartitions with at most ``max_boxes`` boxes, each part count <= ``max_rows``."""
    if max_boxes < 0 or max_rows < 0:
        raise DomainError("bounds must be non-negative")

    def rec(a, left):
        if a == rank:
            yield ()
            return
        for w in range(left + 1):
            for p in partitions(w):
                if len(p.parts) <= max_rows:
                    for rest in rec(a + 1, left - w):
                        yield (p.parts,) + rest

    out = [MultiPartition.of(c) for c in rec(0, max_boxes)]
    return sorted(out, key=lambda m: (m.size, m.as_lists()))


@dataclass(frozen=True)
class GTerm:
    nu: MultiPartition
    y: tuple
    f1: Fraction
    coefficient: object   # Laurent in q (z = 1) or MultiLaurent in (q, z_1..z_{r+1})

    @property
    def fractional(self) -> bool:
        return self.f1.denominator != 1


@dataclass
class GeneratingFunction:
    cartan: CartanData
    z_mode: str
    terms: list = field(default_factory=list)

    @property
    def fractional(self) -> bool:
        return any(t.fractional for t in self.terms)

    @property
    def exponent_denominator(self) -> int:
        return lcm(*(t.f1.denominator for t in self.terms)) if self.terms else 1

    def coefficient(self, y) -> GTerm | None:
        key = tuple(sorted(tuple(x) for x in y))
        for t in self.terms:
            if t.y == key:
                return t
        return None

    def at_y(self, y_values: dict) -> dict:
        """Specialise y_{a,i} to integers: f_1 -> summed coefficient (z = 1 mode only)."""
        if self.z_mode != "dimension":
            raise ConfigurationError("y specialisation is implemented for z_mode='dimension'")
        out: dict = {}
        for t in self.terms:
            w = 1
            for a, i, e in t.y:
                w *= y_values.get((a, i), 0) ** e
            if w:
                out[t.f1] = out.get(t.f1, Laurent(0)) + t.coefficient * w
        return {k: v for k, v in out.items() if v}

    def to_dict(self) -> dict:
        def coeff_text(c):
            if isinstance(c, Laurent):
                return c.to_text("q")
            names = ["q"] + [f"z{i + 1}" for i in range(self.cartan.rank + 1)]
            return c.to_text(names)

        return {
            "type": self.cartan.type,
            "rank": self.cartan.rank,
            "z_mode": self.z_mode,
            "fractional": self.fractional,
            "exponent_denominator": self.exponent_denominator,
            "terms": [{"nu": t.nu.as_lists(), "y": [list(x) for x in t.y], "f1": str(t.f1),
                       "coefficient": coeff_text(t.coefficient)} for t in self.terms],
        }


def generating_function_truncated(cartan: CartanData, max_boxes: int, max_rows: int,
                                  z_mode: str = "dimension") -> GeneratingFunction:
    """All terms of G with nu inside the box/row bound (type A).

    ``z_mode='dimension'`` evaluates ch_z at z = 1 (coefficients are Laurent
    in q); ``z_mode='character'`` keeps z.
    """
    if cartan.type != "A":
        raise ConfigurationError("the generating function is implemented for type A")
    if z_mode not in ("dimension", "character"):
        raise ConfigurationError(f"unknown z_mode {z_mode!r}")
    g = GeneratingFunction(cartan, z_mode)
    for nu in bounded_multipartitions(cartan.rank, max_boxes, max_rows):
        if z_mode == "dimension":
            coeff = Laurent(0)
            for lam, m in full_partition_polynomial(cartan, nu).items():
                coeff = coeff + m * dimension(lam)
        else:
            coeff = graded_character(cartan, nu)
        f1 = f1_exponent(cartan, nu)
        g.terms.append(GTerm(nu, y_monomial(nu), f1, coeff))
    if g.fractional:
        bad = [t.nu.as_lists() for t in g.terms if t.fractional]
        msg = f"fractional q^f1 exponents (denominator {g.exponent_denominator}) for nu in {bad}"
        log.warning(msg)
        warnings.warn(msg, FractionalExponentWarning, stacklevel=2)
    return g
