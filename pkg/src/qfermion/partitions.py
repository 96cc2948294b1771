"""Partitions, multipartitions and dominant weights."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import DomainError

__all__ = [
    "Partition",
    "MultiPartition",
    "DominantWeight",
    "partitions",
    "multipartitions",
    "conjugate",
]


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise DomainError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, parts: Iterable[int]) -> "Partition":
        """Build from parts in any order (zeros dropped)."""
        return cls(tuple(sorted((p for p in parts if p), reverse=True)))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def part(self, i: int) -> int:
        """1-based i-th part, 0 beyond the length."""
        return self.parts[i - 1] if 0 < i <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        return Partition(conjugate(self.parts))

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def conjugate(parts: Sequence[int]) -> tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= i) for i in range(1, parts[0] + 1))


@dataclass(frozen=True)
class MultiPartition:
    components: tuple[Partition, ...]

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Partition) else Partition.of(c) for c in self.components)
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, data: Iterable[Iterable[int]]) -> "MultiPartition":
        return cls(tuple(Partition.of(c) for c in data))

    @classmethod
    def empty(cls, rank: int) -> "MultiPartition":
        return cls(tuple(Partition() for _ in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(c.weight for c in self.components)

    @property
    def size(self) -> int:
        return sum(self.weights)

    def __getitem__(self, a):
        return self.components[a]

    def __iter__(self):
        return iter(self.components)

    def as_lists(self) -> list[list[int]]:
        return [list(c.parts) for c in self.components]

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class DominantWeight:
    """Coordinates on the fundamental weights."""

    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(x) for x in self.coords)
        if any(x < 0 for x in coords):
            raise DomainError(f"dominant weight coordinates must be >= 0: {coords}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def zero(cls, rank: int) -> "DominantWeight":
        return cls((0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __getitem__(self, a):
        return self.coords[a]

    def __iter__(self):
        return iter(self.coords)

    def to_partition(self) -> Partition:
        """Type A_r: the Young diagram with at most r rows (columns of height r+1 stripped)."""
        r = len(self.coords)
        parts = [sum(self.coords[i:]) for i in range(r)]
        return Partition.of(parts)

    @classmethod
    def from_partition(cls, lam: Sequence[int], rank: int) -> "DominantWeight":
        """Type A_rank weight of a partition with at most rank+1 rows."""
        lam = list(lam) + [0] * (rank + 1 - len(lam))
        if len(lam) > rank + 1:
            raise DomainError("partition has too many rows for this rank")
        return cls(tuple(lam[i] - lam[i + 1] for i in range(rank)))

    def __str__(self):
        return "[" + ",".join(map(str, self.coords)) + "]"


@lru_cache(maxsize=None)
def _partitions(n: int, maxpart: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(n: int, maxpart: int | None = None) -> Iterator[Partition]:
    """All partitions of n in reverse lexicographic order."""
    if n < 0:
        return
    for p in _partitions(n, n if maxpart is None else maxpart):
        yield Partition(p)


def multipartitions(weights: Sequence[int]) -> Iterator[MultiPartition]:
    """All tuples of partitions with the given weights."""
    for combo in product(*(tuple(partitions(m)) for m in weights)):
        yield MultiPartition(combo)
