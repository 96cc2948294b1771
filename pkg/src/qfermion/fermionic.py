"""Fermionic multiplicity sums M_{nu,lambda}(q) and N_{nu,lambda}(q).

Input conventions
-----------------
``nu`` lists, for every node a, the levels k of the KR modules W(k omega_a)
in the tensor product: ``nu = ((1, 1),)`` for sl_2 is C^2 (x) C^2.  A
configuration ``mu`` lists string lengths.  The sums are written in terms of
row sequences: the i-th row of nu^{(a)} counts modules of level >= i, i.e.
the conjugate partition.  This is ``RowReading.CONJUGATE``, the shipped
convention; ``RowReading.DIRECT`` reads the parts themselves as rows and is
kept only so the test suite can show the oracles reject it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .cartan import CartanData
from .errors import ConfigurationError, InadmissibleWeight, InvariantViolation
from .laurent import Laurent
from .partitions import DominantWeight, MultiPartition, Partition, conjugate, multipartitions
from .qseries import Convention, q_binomial

__all__ = [
    "RowReading",
    "FermionicInstance",
    "BetheConfiguration",
    "rows",
    "particle_numbers",
    "vacancy_numbers",
    "quadratic_form",
    "m_sum",
    "n_sum",
    "fermionic_sum",
    "configurations",
    "admissible_weights",
    "full_partition_polynomial",
    "linearized_partition_function",
    "graded_character",
]


class RowReading(str, Enum):
    CONJUGATE = "conjugate"
    DIRECT = "direct"


SHIPPED = RowReading.CONJUGATE


def rows(part: Partition | Sequence[int], reading: RowReading = SHIPPED) -> tuple[int, ...]:
    """Row sequence (1-based rows as a 0-based tuple) of a partition."""
    parts = tuple(part)
    if RowReading(reading) is RowReading.CONJUGATE:
        return conjugate(parts)
    return parts


def _row(seq, i):
    return seq[i] if i < len(seq) else 0


@dataclass(frozen=True)
class FermionicInstance:
    cartan: CartanData
    nu: MultiPartition
    lam: DominantWeight
    n: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        nu = self.nu if isinstance(self.nu, MultiPartition) else MultiPartition.of(self.nu)
        lam = self.lam if isinstance(self.lam, DominantWeight) else DominantWeight(tuple(self.lam))
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "lam", lam)
        r = self.cartan.rank
        if nu.rank != r or lam.rank != r:
            raise ConfigurationError(
                f"rank mismatch: cartan {r}, nu {nu.rank}, lambda {lam.rank}")
        object.__setattr__(self, "n", nu.weights)

    @classmethod
    def build(cls, cartan: CartanData, nu, lam) -> "FermionicInstance":
        return cls(cartan, MultiPartition.of(nu), DominantWeight(tuple(lam)))

    @property
    def rank(self) -> int:
        return self.cartan.rank

    def is_admissible(self) -> bool:
        try:
            particle_numbers(self)
        except InadmissibleWeight:
            return False
        return True

    def describe(self) -> dict:
        return {"type": self.cartan.type, "rank": self.rank,
                "nu": self.nu.as_lists(), "lambda": list(self.lam.coords)}


@dataclass(frozen=True)
class BetheConfiguration:
    mu: MultiPartition
    vacancy: tuple[tuple[int, ...], ...]
    energy: Fraction


def particle_numbers(inst: FermionicInstance) -> tuple[int, ...]:
    """Solve C m = n - l; raise InadmissibleWeight unless m is a non-negative integer vector."""
    rhs = [a - b for a, b in zip(inst.n, inst.lam.coords)]
    m = inst.cartan.apply_inverse(rhs)
    if any(x.denominator != 1 or x < 0 for x in m):
        raise InadmissibleWeight(f"C^-1 (n - l) = {[str(x) for x in m]} for {inst.describe()}")
    return tuple(int(x) for x in m)


def vacancy_numbers(nu: MultiPartition, mu: MultiPartition, cartan: CartanData,
                    reading: RowReading = SHIPPED) -> tuple[tuple[int, ...], ...]:
    """p_{a,j} = sum_{i<=j} (nu_i^{(a)} - sum_b C_ab mu_i^{(b)}) for j up to the longest mu row sequence."""
    r = cartan.rank
    nu_rows = [rows(c, reading) for c in nu]
    mu_rows = [rows(c, reading) for c in mu]
    depth = max((len(x) for x in mu_rows), default=0)
    table = []
    for a in range(r):
        acc, col = 0, []
        for i in range(depth):
            pi = _row(nu_rows[a], i) - sum(cartan.cartan[a][b] * _row(mu_rows[b], i) for b in range(r))
            acc += pi
            col.append(acc)
        table.append(tuple(col))
    return tuple(table)


def quadratic_form(mu: MultiPartition, cartan: CartanData,
                   reading: RowReading = SHIPPED) -> Fraction:
    """Q(mu) = 1/2 sum_{a,b} sum_i mu_i^{(a)} C_ab mu_i^{(b)}."""
    r = cartan.rank
    mu_rows = [rows(c, reading) for c in mu]
    depth = max((len(x) for x in mu_rows), default=0)
    total = 0
    for i in range(depth):
        col = [_row(mu_rows[a], i) for a in range(r)]
        total += sum(col[a] * cartan.cartan[a][b] * col[b] for a in range(r) for b in range(r))
    return Fraction(total, 2)


def configurations(inst: FermionicInstance, reading: RowReading = SHIPPED) -> Iterator[BetheConfiguration]:
    """All multipartitions mu of m with their vacancy tables and energies."""
    m = particle_numbers(inst)
    for mu in multipartitions(m):
        yield BetheConfiguration(mu, vacancy_numbers(inst.nu, mu, inst.cartan, reading),
                                 quadratic_form(mu, inst.cartan, reading))


def _term(inst, mu, mode, reading) -> Laurent:
    cartan = inst.cartan
    vac = vacancy_numbers(inst.nu, mu, cartan, reading)
    energy = quadratic_form(mu, cartan, reading)
    if energy.denominator != 1:
        raise InvariantViolation(f"non-integral exponent {energy} for mu={mu}")
    term = Laurent.monomial(int(energy))
    for a, comp in enumerate(mu):
        mr = rows(comp, reading)
        for j in range(len(mr)):
            k = mr[j] - _row(mr, j + 1)
            if k == 0:
                continue
            b = q_binomial(vac[a][j], k, mode)
            if not b:
                return Laurent(0)
            term = term * b
    return term


def fermionic_sum(inst: FermionicInstance, mode: Convention | str = Convention.M,
                  reading: RowReading = SHIPPED, mus=None) -> Laurent:
    """The M- or N-sum; 0 for inadmissible instances.

    ``mus`` restricts the summation to the given configurations (used for
    splitting the enumeration across workers; the reduction is addition).
    """
    mode = Convention(mode)
    try:
        m = particle_numbers(inst)
    except InadmissibleWeight:
        return Laurent(0)
    total = Laurent(0)
    for mu in (multipartitions(m) if mus is None else mus):
        total = total + _term(inst, mu, mode, reading)
    return total


def m_sum(inst: FermionicInstance, reading: RowReading = SHIPPED) -> Laurent:
    return fermionic_sum(inst, Convention.M, reading)


def n_sum(inst: FermionicInstance, reading: RowReading = SHIPPED) -> Laurent:
    return fermionic_sum(inst, Convention.N, reading)


def admissible_weights(cartan: CartanData, nu: MultiPartition) -> list[DominantWeight]:
    """Dominant weights lambda with C^{-1}(n - l) a non-negative integer vector.

    Enumerated through m: l = n - C m >= 0 forces m <= C^{-1} n
    componentwise because C^{-1} has non-negative entries.
    """
    nu = nu if isinstance(nu, MultiPartition) else MultiPartition.of(nu)
    n = nu.weights
    bound = cartan.apply_inverse(n)
    out = []
    for m in product(*(range(int(x) + 1) for x in bound)):
        cm = cartan.apply(m)
        lam = tuple(a - b for a, b in zip(n, cm))
        if all(x >= 0 for x in lam):
            out.append(DominantWeight(lam))
    return sorted(out, key=lambda w: w.coords)


def full_partition_polynomial(cartan: CartanData, nu, mode: Convention | str = Convention.M,
                              reading: RowReading = SHIPPED) -> dict[DominantWeight, Laurent]:
    """lambda -> M_{nu,lambda}(q) over all admissible lambda (zero entries dropped)."""
    nu = nu if isinstance(nu, MultiPartition) else MultiPartition.of(nu)
    out = {}
    for lam in admissible_weights(cartan, nu):
        val = fermionic_sum(FermionicInstance(cartan, nu, lam), mode, reading)
        if val:
            out[lam] = val
    return out


def linearized_partition_function(cartan: CartanData, nu, reading: RowReading = SHIPPED) -> Laurent:
    """Z_nu(q) = sum_lambda M_{nu,lambda}(q) dim V(lambda) (type A)."""
    from .charring import dimension
    total = Laurent(0)
    for lam, val in full_partition_polynomial(cartan, nu, reading=reading).items():
        total = total + val * dimension(lam)
    return total


def graded_character(cartan: CartanData, nu, reading: RowReading = SHIPPED):
    """M_nu(q; z) as a MultiLaurent in (q, z_1, ..., z_{r+1}) (type A).

    Each z-monomial is the min-exponent-0 representative used by
    ``CharacterPoly``.
    """
    from .charring import weight_character
    from .laurent import MultiLaurent
    r = cartan.rank
    total = MultiLaurent.const(r + 2, 0)
    for lam, val in full_partition_polynomial(cartan, nu, reading=reading).items():
        ch = weight_character(lam).poly
        terms = {}
        for qe, qc in val.items():
            for ze, zc in ch.terms.items():
                terms[(qe,) + ze] = qc * zc
        total = total + MultiLaurent(r + 2, terms)
    return total
