"""Classical Q-system: symbolic and character solutions, polynomiality and
the classical constant-term formula for N_{nu,lambda}(1).

The recursion is

    Q_{k+1}^{(a)} Q_{k-1}^{(a)} = (Q_k^{(a)})^2 - prod_{b != a} (Q_k^{(b)})^{-C_ab}

with the minus sign.  Symbolic solutions live in the Laurent ring of the
2r seed variables (Q_0^{(1)}, ..., Q_0^{(r)}, Q_1^{(1)}, ..., Q_1^{(r)}).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .cartan import CartanData
from .charring import CharacterPoly, kr_character
from .errors import ConfigurationError, DomainError, InadmissibleWeight, InvariantViolation, NotDivisible
from .expansion import chamber_weights, truncated_product
from .fermionic import FermionicInstance, particle_numbers, rows
from .laurent import MultiLaurent

__all__ = [
    "QTable",
    "seed_names",
    "solve_symbolic",
    "extend_symbolic",
    "solve_characters",
    "PolynomialityReport",
    "polynomiality_check",
    "ClassicalZExpression",
    "classical_z_factors",
    "classical_constant_term",
    "ConstantTermResult",
    "stable_classical_constant_term",
]

log = logging.getLogger(__name__)


def seed_names(rank: int) -> list[str]:
    return [f"Q0_{a + 1}" for a in range(rank)] + [f"Q1_{a + 1}" for a in range(rank)]


def _neighbour_term(cartan: CartanData, a: int, level: dict):
    """prod_{b != a} (Q_k^{(b)})^{-C_ab}."""
    term = None
    for b in range(cartan.rank):
        if b != a and cartan.cartan[a][b]:
            f = level[b] ** (-cartan.cartan[a][b])
            term = f if term is None else term * f
    return term


@dataclass
class QTable:
    cartan: CartanData
    entries: dict = field(default_factory=dict)
    _spec: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def k_max(self) -> int:
        return max(k for _, k in self.entries)

    def __getitem__(self, key):
        a, k = key
        return self.entries[(a, k)]

    def level(self, k: int) -> dict:
        return {a: self.entries[(a, k)] for a in range(self.cartan.rank)}

    def check_relation(self) -> None:
        """Re-verify the recursion for every interior k."""
        r = self.cartan.rank
        for k in range(1, self.k_max):
            lev = self.level(k)
            for a in range(r):
                rhs = lev[a] * lev[a]
                nb = _neighbour_term(self.cartan, a, lev)
                rhs = rhs - (nb if nb is not None else 1)
                if self.entries[(a, k + 1)] * self.entries[(a, k - 1)] != rhs:
                    raise InvariantViolation(f"Q-system fails at a={a + 1}, k={k}")

    def specialized_entry(self, a: int, k: int) -> MultiLaurent:
        """Q_k^{(a)} with Q_0 = 1 (memoised; entries never change once written)."""
        key = (a, k)
        if key not in self._spec:
            ones = {i: 1 for i in range(self.cartan.rank)}
            self._spec[key] = self.entries[key].specialize(ones)
        return self._spec[key]

    def specialized(self) -> dict:
        """Entries with Q_0 = 1."""
        return {(a, k): self.specialized_entry(a, k) for a, k in self.entries}


def solve_symbolic(cartan: CartanData, k_max: int) -> QTable:
    """Solve the Q-system for 0 <= k <= k_max over the seed Laurent ring."""
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    r = cartan.rank
    n = 2 * r
    table = QTable(cartan)
    for a in range(r):
        table.entries[(a, 0)] = MultiLaurent.variable(a, n)
        table.entries[(a, 1)] = MultiLaurent.variable(r + a, n)
    return extend_symbolic(table, k_max)


def extend_symbolic(table: QTable, k_max: int) -> QTable:
    """Grow ``table`` in place up to level k_max."""
    cartan = table.cartan
    for k in range(table.k_max, k_max):
        lev = table.level(k)
        for a in range(cartan.rank):
            nb = _neighbour_term(cartan, a, lev)
            num = lev[a] * lev[a] - (nb if nb is not None else 1)
            try:
                table.entries[(a, k + 1)] = num.divide_exact(table.entries[(a, k - 1)])
            except NotDivisible as exc:
                raise InvariantViolation(f"Laurent property fails at a={a + 1}, k={k + 1}") from exc
    return table


def solve_characters(cartan: CartanData, k_max: int) -> dict:
    """Q-system over the sl_{r+1} character ring with Q_0 = 1, Q_1 = fundamental characters.

    Every entry is compared with the rectangular Schur function of the KR
    module; a mismatch raises InvariantViolation.
    """
    if cartan.type != "A":
        raise ConfigurationError("character solutions are implemented for type A")
    r = cartan.rank
    table = {}
    for a in range(r):
        table[(a, 0)] = CharacterPoly.one(r)
        table[(a, 1)] = kr_character(a + 1, 1, r)
    for k in range(1, k_max):
        lev = {a: table[(a, k)] for a in range(r)}
        for a in range(r):
            nb = _neighbour_term(cartan, a, lev)
            num = lev[a] * lev[a] - (nb if nb is not None else CharacterPoly.one(r))
            table[(a, k + 1)] = num.divide_exact(table[(a, k - 1)])
    for (a, k), val in table.items():
        if val != kr_character(a + 1, k, r):
            raise InvariantViolation(f"Q_{k}^({a + 1}) is not the KR character")
    return table


def character_images(cartan: CartanData) -> list:
    """Seed images Q_0 -> 1, Q_1^{(a)} -> ch W(omega_a), as polynomials in z (last-zero form)."""
    r = cartan.rank
    one = MultiLaurent.const(r + 1, 1)
    out = [one] * r
    for a in range(r):
        poly = kr_character(a + 1, 1, r).poly
        terms = {}
        for e, v in poly.terms.items():
            key = tuple(x - e[-1] for x in e)
            terms[key] = terms.get(key, 0) + v
        out.append(MultiLaurent(r + 1, terms))
    return out


@dataclass
class PolynomialityReport:
    passed: bool
    checked: int
    failures: list = field(default_factory=list)


def polynomiality_check(table: QTable) -> PolynomialityReport:
    """After Q_0 = 1 every entry must be a polynomial in the Q_1 variables."""
    r = table.cartan.rank
    failures = []
    spec = table.specialized()
    for (a, k), val in sorted(spec.items()):
        if not val.is_polynomial_in(range(r, 2 * r)):
            failures.append({"a": a + 1, "k": k,
                             "value": val.to_text(seed_names(r))})
    return PolynomialityReport(not failures, len(spec), failures)


# ---------------------------------------------------------------------------
# classical constant term


@dataclass
class ClassicalZExpression:
    instance: FermionicInstance
    k: int
    factors: list


def _tail_exponents(inst: FermionicInstance) -> tuple[int, ...]:
    return tuple(x + 1 for x in inst.lam.coords)


def classical_z_factors(inst: FermionicInstance, table: QTable, k: int) -> ClassicalZExpression:
    """Ordered factors (element, exponent) of Z^{(k)} with Q_0 = 1."""
    r = inst.rank
    if table.k_max < k + 1:
        raise DomainError("Q-table too shallow for this k")
    spec = table.specialized_entry
    factors = []
    for a in range(r):
        factors.append((spec(a, 1), 1))
    nu_rows = [rows(c) for c in inst.nu]
    depth = max((len(x) for x in nu_rows), default=0)
    for i in range(1, depth + 1):
        for a in range(r):
            e = (nu_rows[a][i - 1] if i - 1 < len(nu_rows[a]) else 0) - \
                (nu_rows[a][i] if i < len(nu_rows[a]) else 0)
            if e:
                factors.append((spec(a, i), e))
    for a, e in enumerate(_tail_exponents(inst)):
        factors.append((spec(a, k), e))
        factors.append((spec(a, k + 1), -e))
    return ClassicalZExpression(inst, k, factors)


def _spread(elems) -> int:
    """Largest partial-sum coordinate range among the Q_1 exponents of ``elems``."""
    best = 1
    for f in elems:
        if not f:
            continue
        n = f.nvars // 2
        cols = []
        for e in f.terms:
            q1 = e[n:]
            cols.append([sum(q1[i:]) for i in range(n)])
        for i in range(n):
            vals = [c[i] for c in cols]
            best = max(best, max(vals) - min(vals))
    return best


def classical_constant_term(inst: FermionicInstance, k: int, table: QTable | None = None) -> int:
    """<Z^{(k)}>: constant term in Q_1 at Q_0 = 1, with Q_{k+1}^{-1} expanded
    as a series in the chamber order of ``expansion``.  0 if inadmissible."""
    try:
        particle_numbers(inst)
    except InadmissibleWeight:
        return 0
    depth = max((max(c.parts, default=0) for c in inst.nu), default=0)
    if k < depth + 1:
        raise DomainError(f"k must be >= {depth + 1}")
    if table is None:
        table = solve_symbolic(inst.cartan, k + 1)
    elif table.k_max < k + 1:
        extend_symbolic(table, k + 1)
    z = classical_z_factors(inst, table, k)
    weights = chamber_weights(inst.rank, _spread([f for f, e in z.factors if e < 0]))
    prod = truncated_product(z.factors, weights, 0)
    zero = (0,) * (2 * inst.rank)
    return prod.coeff(zero)


@dataclass
class ConstantTermResult:
    value: object
    k: int
    history: list
    stable: bool


def stable_classical_constant_term(inst: FermionicInstance, table: QTable | None = None,
                                   k_cap: int | None = None) -> ConstantTermResult:
    """Increase k until two consecutive constant terms agree."""
    depth = max((max(c.parts, default=0) for c in inst.nu), default=0)
    k = depth + 1
    if table is None:
        table = solve_symbolic(inst.cartan, k + 1)
    cap = k_cap if k_cap is not None else depth + max(inst.lam.coords, default=0) + 4
    history = []
    while k <= cap:
        history.append((k, classical_constant_term(inst, k, table)))
        if len(history) >= 2 and history[-1][1] == history[-2][1]:
            return ConstantTermResult(history[-1][1], history[-2][0], history, True)
        k += 1
    log.warning("classical constant term did not stabilise for %s: %s", inst.describe(), history)
    return ConstantTermResult(history[-1][1] if history else None, k - 1, history, False)
