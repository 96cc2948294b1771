"""Type-A character ring: Schur polynomials, KR characters and oracles.

Characters of sl_{r+1} live in Z[z_1^±, ..., z_{r+1}^±] / (z_1...z_{r+1} - 1).
``CharacterPoly`` keeps, for each monomial, the representative with smallest
exponent 0; that is a canonical form for the quotient.  Division goes
through the Laurent ring in z_1..z_r (set z_{r+1} = 1/(z_1...z_r)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, InvariantViolation
from .laurent import Laurent, MultiLaurent
from .partitions import DominantWeight, Partition

__all__ = [
    "CharacterPoly",
    "DecompositionResult",
    "schur",
    "schur_alternant",
    "kr_character",
    "tensor_decompose",
    "kostka_charge",
    "kostka_cocharge",
    "charge",
    "standard_tableaux",
    "dimension",
    "weyl_dimension",
    "hook_length_count",
]


class CharacterPoly:
    """Element of the sl_{r+1} character ring."""

    __slots__ = ("rank", "poly")

    def __init__(self, poly: MultiLaurent, rank: int | None = None):
        n = poly.nvars
        if rank is None:
            rank = n - 1
        if n != rank + 1:
            raise DomainError("character polynomial needs rank+1 variables")
        terms = {}
        for e, v in poly.terms.items():
            low = min(e)
            key = tuple(x - low for x in e)
            terms[key] = terms.get(key, 0) + v
        self.rank = rank
        self.poly = MultiLaurent(n, terms)

    @classmethod
    def one(cls, rank: int) -> "CharacterPoly":
        return cls(MultiLaurent.const(rank + 1, 1), rank)

    @property
    def nvars(self) -> int:
        return self.rank + 1

    def _check(self, other):
        if not isinstance(other, CharacterPoly) or other.rank != self.rank:
            raise DomainError("character rank mismatch")

    def __add__(self, other):
        self._check(other)
        return CharacterPoly(self.poly + other.poly, self.rank)

    def __sub__(self, other):
        self._check(other)
        return CharacterPoly(self.poly - other.poly, self.rank)

    def __neg__(self):
        return CharacterPoly(-self.poly, self.rank)

    def __mul__(self, other):
        if isinstance(other, int):
            return CharacterPoly(self.poly * other, self.rank)
        self._check(other)
        return CharacterPoly(self.poly * other.poly, self.rank)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return CharacterPoly(self.poly ** n, self.rank)

    def divide_exact(self, other: "CharacterPoly") -> "CharacterPoly":
        self._check(other)
        num, den = _last_zero(self.poly), _last_zero(other.poly)
        return CharacterPoly(num.divide_exact(den), self.rank)

    def __eq__(self, other):
        if isinstance(other, int):
            other = CharacterPoly.one(self.rank) * other
        if not isinstance(other, CharacterPoly):
            return NotImplemented
        return self.rank == other.rank and self.poly == other.poly

    def __hash__(self):
        return hash((self.rank, self.poly))

    def at_one(self) -> int:
        return sum(self.poly.terms.values())

    def is_symmetric(self, perms: Iterable[Sequence[int]] | None = None) -> bool:
        """Invariance under the given permutations (default: adjacent transpositions)."""
        n = self.nvars
        if perms is None:
            perms = []
            for i in range(n - 1):
                p = list(range(n))
                p[i], p[i + 1] = p[i + 1], p[i]
                perms.append(p)
        for p in perms:
            permuted = MultiLaurent(n, {tuple(e[p[i]] for i in range(n)): v
                                        for e, v in self.poly.terms.items()})
            if CharacterPoly(permuted, self.rank) != self:
                return False
        return True

    def to_text(self) -> str:
        return self.poly.to_text([f"z{i + 1}" for i in range(self.nvars)])

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"CharacterPoly(rank={self.rank}, {self.to_text()!r})"


def _last_zero(p: MultiLaurent) -> MultiLaurent:
    terms = {}
    for e, v in p.terms.items():
        key = tuple(x - e[-1] for x in e)
        terms[key] = terms.get(key, 0) + v
    return MultiLaurent(p.nvars, terms)


@dataclass(frozen=True)
class DecompositionResult:
    multiplicities: dict

    def __getitem__(self, weight):
        if not isinstance(weight, DominantWeight):
            weight = DominantWeight(tuple(weight))
        return self.multiplicities.get(weight, 0)

    def items(self):
        return sorted(self.multiplicities.items(), key=lambda kv: kv[0].coords, reverse=True)

    def total_dimension(self) -> int:
        return sum(m * dimension(w) for w, m in self.multiplicities.items())


# ---------------------------------------------------------------------------
# Schur polynomials


@lru_cache(maxsize=None)
def _schur_terms(lam: tuple[int, ...], n: int) -> tuple:
    """Monomial expansion by the branching rule s_lam(x_1..x_n) =
    sum over mu interlacing lam of s_mu(x_1..x_{n-1}) x_n^{|lam|-|mu|}."""
    lam = tuple(p for p in lam if p)
    if len(lam) > n:
        return ()
    if n == 0:
        return (((), 1),) if not lam else ()
    if not lam:
        return (((0,) * n, 1),)
    full = lam + (0,) * (n - len(lam))
    out: dict = {}
    for mu in _interlacing(full):
        sub = _schur_terms(mu, n - 1)
        k = sum(full) - sum(mu)
        for e, v in sub:
            key = e + (k,)
            out[key] = out.get(key, 0) + v
    return tuple(out.items())


def _interlacing(lam: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """mu with lam_1 >= mu_1 >= lam_2 >= ... >= mu_{n-1} >= lam_n."""
    n = len(lam)

    def rec(i, acc):
        if i == n - 1:
            yield tuple(acc)
            return
        for m in range(lam[i + 1], lam[i] + 1):
            acc.append(m)
            yield from rec(i + 1, acc)
            acc.pop()

    yield from rec(0, [])


def _as_parts(partition) -> tuple[int, ...]:
    if isinstance(partition, Partition):
        return partition.parts
    return Partition.of(partition).parts


def schur_polynomial(partition, num_vars: int) -> MultiLaurent:
    """s_lambda(z_1..z_n) as an honest homogeneous polynomial."""
    lam = _as_parts(partition)
    if len(lam) > num_vars:
        raise DomainError(f"partition {lam} has more than {num_vars} rows")
    return MultiLaurent(num_vars, dict(_schur_terms(lam, num_vars)))


def schur(partition, num_vars: int) -> CharacterPoly:
    return CharacterPoly(schur_polynomial(partition, num_vars), num_vars - 1)


def schur_alternant(partition, num_vars: int) -> MultiLaurent:
    """Independent route: a_{lambda+delta} / a_delta by exact division."""
    lam = list(_as_parts(partition))
    n = num_vars
    if len(lam) > n:
        raise DomainError(f"partition {lam} has more than {n} rows")
    lam += [0] * (n - len(lam))

    def alternant(exps):
        from itertools import permutations
        terms = {}
        for perm in permutations(range(n)):
            sign = _perm_sign(perm)
            e = [0] * n
            for i, j in enumerate(perm):
                e[j] = exps[i]
            terms[tuple(e)] = terms.get(tuple(e), 0) + sign
        return MultiLaurent(n, terms)

    delta = [n - 1 - i for i in range(n)]
    num = alternant([a + b for a, b in zip(lam, delta)])
    den = alternant(delta)
    return num.divide_exact(den)


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def kr_character(a: int, k: int, rank: int) -> CharacterPoly:
    """Character of the KR module W(k*omega_a) of sl_{rank+1}: an a x k rectangle."""
    if not 1 <= a <= rank:
        raise DomainError(f"node a={a} outside 1..{rank}")
    if k < 0:
        raise DomainError("k must be non-negative")
    if k == 0:
        return CharacterPoly.one(rank)
    return schur((k,) * a, rank + 1)


def weight_character(weight: DominantWeight) -> CharacterPoly:
    return schur(weight.to_partition(), weight.rank + 1)


# ---------------------------------------------------------------------------
# tensor product oracle


def tensor_decompose(characters: Sequence[CharacterPoly], rank: int | None = None) -> DecompositionResult:
    """Multiplicities of irreducibles in a product of characters.

    Peels off the Schur polynomial of the lex-leading monomial until the
    remainder vanishes.
    """
    if not characters:
        if rank is None:
            raise DomainError("rank needed for an empty product")
        return DecompositionResult({DominantWeight.zero(rank): 1})
    rank = characters[0].rank
    total = CharacterPoly.one(rank)
    for ch in characters:
        total = total * ch
    return decompose(total)


def decompose(ch: CharacterPoly) -> DecompositionResult:
    rank = ch.rank
    rem = ch
    mult: dict = {}
    while rem.poly:
        lead = max(rem.poly.terms)
        c = rem.poly.terms[lead]
        if any(a < b for a, b in zip(lead, lead[1:])):
            raise InvariantViolation(f"leading monomial {lead} is not dominant")
        if c < 0:
            raise InvariantViolation(f"negative multiplicity {c} for {lead}")
        w = DominantWeight(tuple(lead[i] - lead[i + 1] for i in range(rank)))
        mult[w] = mult.get(w, 0) + c
        rem = rem - schur(lead, rank + 1) * c
    return DecompositionResult(mult)


# ---------------------------------------------------------------------------
# dimensions


def weyl_dimension(weight: DominantWeight) -> int:
    lam = list(weight.to_partition().parts)
    n = weight.rank + 1
    lam += [0] * (n - len(lam))
    num = prod(lam[i] - lam[j] + j - i for i in range(n) for j in range(i + 1, n))
    den = prod(j - i for i in range(n) for j in range(i + 1, n))
    return num // den


def dimension(weight: DominantWeight, rank: int | None = None) -> int:
    """dim V(lambda) from the character at z = 1, cross-checked against Weyl's formula."""
    if rank is not None and weight.rank != rank:
        raise DomainError("weight rank mismatch")
    d = weight_character(weight).at_one()
    w = weyl_dimension(weight)
    if d != w:
        raise InvariantViolation(f"character dimension {d} != Weyl dimension {w}")
    return d


# ---------------------------------------------------------------------------
# Kostka polynomials via the charge statistic


def standard_tableaux(shape) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Standard Young tableaux of the given shape (English convention, rows)."""
    shape = _as_parts(shape)
    n = sum(shape)

    def rec(rows, k):
        if k > n:
            yield tuple(tuple(r) for r in rows)
            return
        for i, r in enumerate(rows):
            if len(r) < shape[i] and (i == 0 or len(rows[i - 1]) > len(r)):
                r.append(k)
                yield from rec(rows, k + 1)
                r.pop()

    yield from rec([[] for _ in shape], 1)


def reading_word(tableau) -> list[int]:
    """Rows read left to right, bottom row first."""
    return [x for row in reversed(tableau) for x in row]


def charge(word: Sequence[int]) -> int:
    """Lascoux-Schutzenberger charge of a standard word.

    1 gets index 0; r+1 gets the index of r, plus one if r+1 lies to the
    left of r.  The charge is the sum of indices, so a single row has
    charge 0 and a single column has charge n(n-1)/2.
    """
    pos = {x: i for i, x in enumerate(word)}
    n = len(word)
    if sorted(word) != list(range(1, n + 1)):
        raise DomainError("charge is implemented for standard words")
    index, total = 0, 0
    for r in range(1, n):
        if pos[r + 1] < pos[r]:
            index += 1
        total += index
    return total


def kostka_charge(lam, N: int) -> Laurent:
    """K_{lambda,(1^N)}(q) = sum over standard tableaux of q^charge."""
    parts = _as_parts(lam)
    if sum(parts) != N:
        raise DomainError(f"|lambda| = {sum(parts)} != N = {N}")
    out: dict = {}
    for t in standard_tableaux(parts):
        c = charge(reading_word(t))
        out[c] = out.get(c, 0) + 1
    return Laurent(out)


def kostka_cocharge(lam, N: int) -> Laurent:
    """q^{n(1^N)} K_{lambda,(1^N)}(1/q), with n(1^N) = N(N-1)/2."""
    return kostka_charge(lam, N).scale_exponents(-1).shift(N * (N - 1) // 2)


def hook_length_count(lam) -> int:
    parts = _as_parts(lam)
    conj = [sum(1 for p in parts if p > j) for j in range(parts[0])] if parts else []
    hooks = prod(parts[i] - j + conj[j] - i - 1 for i in range(len(parts)) for j in range(parts[i]))
    return factorial(sum(parts)) // hooks
