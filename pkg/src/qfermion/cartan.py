"""Cartan data for simply-laced types."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigurationError

__all__ = ["CartanData", "cartan"]


def _det(m):
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(m)
    a = [list(map(int, row)) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def _type_a(r):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)] for i in range(r)]


def _type_d(r):
    c = _type_a(r)
    # fork at node r-2 (0-based): nodes r-2 and r-1 both attach to r-3
    c[r - 2][r - 1] = c[r - 1][r - 2] = 0
    c[r - 3][r - 1] = c[r - 1][r - 3] = -1
    return c


def _type_e(r):
    # Bourbaki labelling: chain 1-3-4-5-...-r with node 2 attached to node 4
    c = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
    edges = [(1, 3), (2, 4), (3, 4)] + [(k, k + 1) for k in range(4, r)]
    for i, j in edges:
        c[i - 1][j - 1] = c[j - 1][i - 1] = -1
    return c


@dataclass(frozen=True)
class CartanData:
    type: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    det: int = field(init=False)
    inverse: tuple[tuple[Fraction, ...], ...] = field(init=False, repr=False)
    Lambda: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        c = self.cartan
        r = self.rank
        if len(c) != r or any(len(row) != r for row in c):
            raise ConfigurationError("Cartan matrix shape does not match rank")
        for i in range(r):
            for j in range(r):
                if i == j and c[i][j] != 2:
                    raise ConfigurationError("Cartan diagonal must be 2")
                if i != j and (c[i][j] not in (0, -1) or c[i][j] != c[j][i]):
                    raise ConfigurationError("not a simply-laced Cartan matrix")
        d = _det(c)
        if d <= 0:
            raise ConfigurationError("Cartan matrix is not positive definite")
        inv = _inverse(c)
        lam = []
        for row in inv:
            out = []
            for x in row:
                y = d * x
                if y.denominator != 1:
                    raise ConfigurationError("|C| C^-1 is not integral")
                out.append(int(y))
            lam.append(tuple(out))
        object.__setattr__(self, "det", d)
        object.__setattr__(self, "inverse", inv)
        object.__setattr__(self, "Lambda", tuple(lam))

    @property
    def label(self) -> str:
        return f"{self.type}{self.rank}"

    def apply(self, vec):
        """C @ vec."""
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.cartan)

    def apply_inverse(self, vec):
        """C^{-1} @ vec, exact rationals."""
        return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self.inverse)


def cartan(type: str, rank: int) -> CartanData:
    """Cartan data for type A (any rank >= 1), D (rank >= 4) or E6/E7/E8."""
    t = str(type).upper()
    if not isinstance(rank, int) or rank < 1:
        raise ConfigurationError(f"rank must be a positive integer, got {rank!r}")
    if t == "A":
        m = _type_a(rank)
    elif t == "D" and rank >= 4:
        m = _type_d(rank)
    elif t == "E" and rank in (6, 7, 8):
        m = _type_e(rank)
    else:
        raise ConfigurationError(f"unsupported Cartan type {type}{rank}")
    return CartanData(t, rank, tuple(tuple(row) for row in m))
