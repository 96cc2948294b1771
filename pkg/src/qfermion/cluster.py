"""Classical cluster mutation (skew-symmetric exchange matrices), the
Q-system seed and empirical Laurent-property audits.

``B[i][j]`` is the number of arrows j -> i (negative for arrows i -> j), so
the exchange relation in direction j reads

    x_j' x_j = prod_i x_i^{[B_ij]_+} + prod_i x_i^{[-B_ij]_+}.

With this reading mutation is an involution and the rank-2 alternating
sequence returns to the initial cluster after 5 steps with the two slots
swapped (both checked by the tests).  The Q-system seed
realises the plus-sign Q-system; the minus-sign solutions of ``qsystem``
are recovered by ``plus_to_minus``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cartan import CartanData
from .errors import ConfigurationError, DomainError, InvariantViolation, NotDivisible, QFermionError
from .laurent import MultiLaurent

__all__ = [
    "ExchangeMatrix",
    "Seed",
    "mutate",
    "mutate_sequence",
    "initial_seed",
    "qsystem_seed",
    "qsystem_sequence",
    "qsystem_entries_from_cluster",
    "AuditStep",
    "BudgetExceeded",
    "AuditReport",
    "laurent_audit",
    "random_exchange_matrix",
    "plus_to_minus",
    "ProbeReport",
    "modular_probe",
]


@dataclass(frozen=True)
class ExchangeMatrix:
    B: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        B = tuple(tuple(int(x) for x in row) for row in self.B)
        n = len(B)
        if any(len(row) != n for row in B):
            raise DomainError("exchange matrix must be square")
        for i in range(n):
            for j in range(n):
                if B[i][j] != -B[j][i]:
                    raise DomainError(f"exchange matrix not skew-symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "B", B)

    @property
    def size(self) -> int:
        return len(self.B)

    def __getitem__(self, ij):
        i, j = ij
        return self.B[i][j]

    def mutate(self, j: int) -> "ExchangeMatrix":
        """Matrix mutation at the 0-based direction j."""
        B, n = self.B, self.size
        out = []
        for i in range(n):
            row = []
            for k in range(n):
                if i == j or k == j:
                    row.append(-B[i][k])
                else:
                    bij, bjk = B[i][j], B[j][k]
                    row.append(B[i][k] + (abs(bij) * bjk + bij * abs(bjk)) // 2)
            out.append(tuple(row))
        return ExchangeMatrix(tuple(out))

    def as_lists(self) -> list[list[int]]:
        return [list(row) for row in self.B]


@dataclass(frozen=True)
class Seed:
    B: ExchangeMatrix
    cluster: tuple[MultiLaurent, ...]
    history: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.cluster) != self.B.size:
            raise DomainError("cluster length does not match exchange matrix")

    @property
    def size(self) -> int:
        return self.B.size

    def same_as(self, other: "Seed") -> bool:
        return self.B == other.B and self.cluster == other.cluster


def initial_seed(B) -> Seed:
    B = B if isinstance(B, ExchangeMatrix) else ExchangeMatrix(tuple(map(tuple, B)))
    n = B.size
    return Seed(B, tuple(MultiLaurent.variable(i, n) for i in range(n)))


class BudgetExceeded(QFermionError):
    """A multiplication would exceed the configured work budget."""


def _checked_mul(x: MultiLaurent, y: MultiLaurent, budget: int | None) -> MultiLaurent:
    if budget is not None and len(x) * len(y) > budget:
        raise BudgetExceeded(f"product of {len(x)} x {len(y)} terms exceeds budget {budget}")
    return x * y


def _exchange_numerator(seed: Seed, j: int, budget: int | None = None) -> MultiLaurent:
    n = seed.size
    plus = MultiLaurent.const(seed.cluster[0].nvars, 1)
    minus = plus
    for i in range(n):
        b = seed.B[i, j]
        for _ in range(abs(b)):
            if b > 0:
                plus = _checked_mul(plus, seed.cluster[i], budget)
            else:
                minus = _checked_mul(minus, seed.cluster[i], budget)
    return plus + minus


def mutate(seed: Seed, j: int, budget: int | None = None) -> Seed:
    """Mutation in the 1-based direction j.

    ``budget`` caps the term-pair count of any single multiplication;
    exceeding it raises BudgetExceeded instead of running unbounded.
    """
    if not 1 <= j <= seed.size:
        raise DomainError(f"direction {j} out of range 1..{seed.size}")
    i0 = j - 1
    num = _exchange_numerator(seed, i0, budget)
    new = num.divide_exact(seed.cluster[i0])
    cluster = seed.cluster[:i0] + (new,) + seed.cluster[i0 + 1:]
    return Seed(seed.B.mutate(i0), cluster, seed.history + (j,))


def mutate_sequence(seed: Seed, sequence: Sequence[int]) -> Seed:
    for j in sequence:
        seed = mutate(seed, j)
    return seed


def qsystem_seed(cartan: CartanData) -> Seed:
    """Seed with B = [[0, -C], [C, 0]] and cluster (Q_0^{(1..r)}, Q_1^{(1..r)})."""
    if cartan.type not in ("A", "D", "E"):
        raise ConfigurationError("Q-system seed needs a simply-laced Cartan matrix")
    r = cartan.rank
    C = cartan.cartan
    B = [[0] * (2 * r) for _ in range(2 * r)]
    for a in range(r):
        for b in range(r):
            B[a][r + b] = -C[a][b]
            B[r + a][b] = C[a][b]
    return initial_seed(B)


def qsystem_sequence(rank: int, steps: int) -> list[int]:
    """Directions of ``steps`` Q-system time steps: all Q_0 slots, then all Q_1 slots, ...

    After step s the cluster holds (Q_s, Q_{s+1}) in some slot order; the
    slots of level k are the Q_0 slots when k is even.
    """
    seq = []
    for s in range(steps):
        block = range(1, rank + 1) if s % 2 == 0 else range(rank + 1, 2 * rank + 1)
        seq.extend(block)
    return seq


def qsystem_entries_from_cluster(cartan: CartanData, k_max: int) -> dict:
    """(a, k) -> plus-sign Q_k^{(a)} obtained by replaying ``qsystem_sequence``."""
    r = cartan.rank
    seed = qsystem_seed(cartan)
    out = {}
    for a in range(r):
        out[(a, 0)] = seed.cluster[a]
        out[(a, 1)] = seed.cluster[r + a]
    for s in range(k_max - 1):
        offset = 0 if s % 2 == 0 else r
        for a in range(r):
            seed = mutate(seed, offset + a + 1)
        for a in range(r):
            out[(a, s + 2)] = seed.cluster[offset + a]
    return out


def plus_to_minus(poly: MultiLaurent, a: int, cartan: CartanData) -> MultiLaurent:
    """Map a plus-sign Q-system entry R_k^{(a)} to the minus-sign Q_k^{(a)}.

    Q_k^{(b)} = eps_b R_k^{(b)} with eps_b = exp(i pi x_b), x = C^{-1}(1,...,1),
    turns the plus sign into a minus sign.  A monomial c R_0^m R_1^n becomes
    (-1)^{x_a - x.(m+n)} c Q_0^m Q_1^n; the exponent must be an integer.
    """
    r = cartan.rank
    x = cartan.apply_inverse([1] * r)
    terms = {}
    for e, c in poly.terms.items():
        s = x[a] - sum(x[b] * (e[b] + e[r + b]) for b in range(r))
        if s.denominator != 1:
            raise InvariantViolation(f"non-integral sign exponent {s} for monomial {e}")
        terms[e] = -c if s.numerator % 2 else c
    return MultiLaurent(poly.nvars, terms)


@dataclass
class AuditStep:
    direction: int
    terms: int
    max_degree: int
    min_degree: int
    seconds: float


@dataclass
class AuditReport:
    """Outcome of a replay.

    ``status`` is ``laurent`` (every variable Laurent), ``not-laurent`` (an
    exact division failed; ``counterexample`` holds the data) or
    ``budget-exceeded`` (the replay was stopped, nothing was decided).
    """
    status: str
    steps: list = field(default_factory=list)
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.status == "laurent"

    @property
    def max_terms(self) -> int:
        return max((s.terms for s in self.steps), default=0)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "passed": self.passed,
            "steps": [vars(s) for s in self.steps],
            "counterexample": self.counterexample,
        }


def laurent_audit(seed: Seed, sequence: Sequence[int], budget: int | None = None) -> AuditReport:
    """Replay ``sequence``; every new variable must be Laurent in the initial cluster."""
    report = AuditReport("laurent")
    for j in sequence:
        t0 = time.perf_counter()
        try:
            new_seed = mutate(seed, j, budget)
        except BudgetExceeded as exc:
            report.status = "budget-exceeded"
            report.counterexample = {"history": list(seed.history), "direction": j, "reason": str(exc)}
            return report
        except NotDivisible:
            report.status = "not-laurent"
            report.counterexample = {
                "history": list(seed.history),
                "direction": j,
                "B": seed.B.as_lists(),
                "numerator": str(_exchange_numerator(seed, j - 1)),
                "denominator": str(seed.cluster[j - 1]),
            }
            return report
        var = new_seed.cluster[j - 1]
        lo, hi = var.min_exponents(), var.max_exponents()
        report.steps.append(AuditStep(j, len(var), max(hi), min(lo), time.perf_counter() - t0))
        seed = new_seed
    return report


def random_exchange_matrix(n: int, rng: random.Random, bound: int = 2) -> ExchangeMatrix:
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-bound, bound)
            B[i][j], B[j][i] = v, -v
    return ExchangeMatrix(tuple(map(tuple, B)))


# ---------------------------------------------------------------------------
# modular one-variable probe
#
# Fix a variable x_v, send every other initial variable to a random nonzero
# residue mod a prime and replay the sequence with univariate Laurent
# polynomials.  Specialisation commutes with exact division, so a nonzero
# remainder proves the exchange is not Laurent; zero remainders are only
# evidence.  Degrees stay in the thousands where the exact multivariate
# replay needs millions of terms.

PROBE_PRIME = (1 << 31) - 1


try:   # optional: FFT multiplication for the packed integers
    from gmpy2 import mpz as _bigint
except ImportError:   # pragma: no cover
    _bigint = int


def _pack(c: list, width: int):
    return _bigint(int.from_bytes(b"".join(x.to_bytes(width, "little") for x in c), "little"))


def _unpack(n, width: int, count: int, p: int) -> list:
    raw = int(n).to_bytes(width * count + width, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") % p for i in range(count)]


def _pmul(a: list, b: list, p: int) -> list:
    """Product of coefficient lists mod p by Kronecker substitution."""
    if not a or not b:
        return []
    width = (2 * p.bit_length() + min(len(a), len(b)).bit_length() + 8) // 8
    return _unpack(_pack(a, width) * _pack(b, width), width, len(a) + len(b) - 1, p)


def _pinv(f: list, n: int, p: int) -> list:
    """First n coefficients of 1/f (f[0] != 0) by Newton iteration."""
    g = [pow(f[0], p - 2, p)]
    k = 1
    while k < n:
        k = min(2 * k, n)
        fg = _pmul(f[:k], g, p)[:k]
        e = [(-x) % p for x in fg]
        e[0] = (e[0] + 2) % p
        g = _pmul(g, e, p)[:k]
    return g


@dataclass(frozen=True)
class _ULaurent:
    lo: int
    c: tuple

    @staticmethod
    def make(lo: int, c) -> "_ULaurent":
        c = list(c)
        i, j = 0, len(c)
        while i < j and c[i] == 0:
            i += 1
        while j > i and c[j - 1] == 0:
            j -= 1
        return _ULaurent(lo + i if i < j else 0, tuple(c[i:j]))


def _umul(a: _ULaurent, b: _ULaurent, p: int) -> _ULaurent:
    return _ULaurent.make(a.lo + b.lo, _pmul(list(a.c), list(b.c), p))


def _uadd(a: _ULaurent, b: _ULaurent, p: int) -> _ULaurent:
    if not a.c:
        return b
    if not b.c:
        return a
    lo = min(a.lo, b.lo)
    out = [0] * (max(a.lo + len(a.c), b.lo + len(b.c)) - lo)
    for x in (a, b):
        for i, v in enumerate(x.c):
            out[x.lo - lo + i] = (out[x.lo - lo + i] + v) % p
    return _ULaurent.make(lo, out)


def _udiv(a: _ULaurent, b: _ULaurent, p: int) -> _ULaurent | None:
    """a / b if exact, else None."""
    if not a.c:
        return a
    n = len(a.c) - len(b.c) + 1
    if n <= 0:
        return None
    q = _pmul(list(a.c), _pinv(list(b.c), n, p), p)[:n]
    if _pmul(q, list(b.c), p) != list(a.c):
        return None
    return _ULaurent.make(a.lo - b.lo, q)


@dataclass
class ProbeReport:
    """``consistent`` means no specialised division failed (evidence, not proof);
    ``not-laurent`` is a proof of failure; ``budget-exceeded`` decides nothing."""
    status: str
    max_degree_span: int = 0
    failed_at: dict | None = None

    @property
    def consistent(self) -> bool:
        return self.status == "consistent"


def modular_probe(B, sequence: Sequence[int], rng: random.Random,
                  prime: int = PROBE_PRIME, max_span: int | None = 20_000) -> ProbeReport:
    """Replay ``sequence`` once per free variable over F_p(x_v); see the note above.

    A variable whose degree span exceeds ``max_span`` stops the probe with
    status ``budget-exceeded``.
    """
    B = B if isinstance(B, ExchangeMatrix) else ExchangeMatrix(tuple(map(tuple, B)))
    n = B.size
    span = 0
    for v in range(n):
        cluster = [_ULaurent(1, (1,)) if i == v else _ULaurent(0, (rng.randrange(1, prime),))
                   for i in range(n)]
        mat = B
        for step, j in enumerate(sequence):
            j0 = j - 1
            if max_span is not None:
                # degree span of the numerator bounds the span of the quotient
                sides = [sum(abs(mat[i, j0]) * len(cluster[i].c) for i in range(n) if s * mat[i, j0] > 0)
                         for s in (1, -1)]
                if max(sides) - len(cluster[j0].c) > max_span:
                    return ProbeReport("budget-exceeded", span, {"free_variable": v + 1, "step": step + 1,
                                                                 "direction": j})
            plus = minus = _ULaurent(0, (1,))
            for i in range(n):
                b = mat[i, j0]
                for _ in range(abs(b)):
                    if b > 0:
                        plus = _umul(plus, cluster[i], prime)
                    else:
                        minus = _umul(minus, cluster[i], prime)
            new = _udiv(_uadd(plus, minus, prime), cluster[j0], prime)
            if new is None:
                return ProbeReport("not-laurent", span, {"free_variable": v + 1, "step": step + 1,
                                                         "direction": j})
            cluster[j0] = new
            mat = mat.mutate(j0)
            span = max(span, len(new.c))
            if max_span is not None and span > max_span:
                return ProbeReport("budget-exceeded", span, {"free_variable": v + 1, "step": step + 1,
                                                             "direction": j})
    return ProbeReport("consistent", span)
