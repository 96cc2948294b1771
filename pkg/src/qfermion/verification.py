"""Verification suites shared by the CLI and the acceptance tests.

Each suite turns a list of items (instances, multipartitions or ranks) into
one row per item with a ``passed`` flag.  Rows are plain JSON-ready dicts
so they can be produced in worker processes and cached.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod

from .cartan import CartanData, cartan
from .charring import dimension, kostka_charge, kr_character, tensor_decompose
from .cluster import (initial_seed, laurent_audit, modular_probe, qsystem_seed, qsystem_sequence,
                      random_exchange_matrix)
from .errors import ConfigurationError
from .fermionic import FermionicInstance, full_partition_polynomial, m_sum, n_sum
from .partitions import DominantWeight, MultiPartition, partitions
from .qsystem import polynomiality_check, solve_characters, solve_symbolic, stable_classical_constant_term
from .quantum import quantum_polynomiality, solve_quantum, verify_constant_term_identity
from .sweeps import sweep_instances

__all__ = [
    "SuiteResult",
    "SUITES",
    "run_suite",
    "kostka_normalized",
    "random_quiver_matrices",
    "random_cluster_items",
    "run_checks",
]

log = logging.getLogger(__name__)

# per-process table memo; tables only ever grow
_TABLES: dict = {}


def _tables(kind: str, c: CartanData):
    key = (kind, c.type, c.rank)
    if key not in _TABLES:
        _TABLES[key] = solve_symbolic(c, 2) if kind == "classical" else solve_quantum(c, 2, verify=False)
    return _TABLES[key]


def _instance(d: dict) -> FermionicInstance:
    return FermionicInstance.build(cartan(d["type"], d["rank"]), d["nu"], d["lambda"])


@dataclass
class SuiteResult:
    suite: str
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.rows)

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r["passed"]]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "count": len(self.rows),
                "failures": len(self.failures), "rows": self.rows}


# ---------------------------------------------------------------------------
# per-item checks (module level so they pickle)


def check_m_equals_n(d: dict) -> dict:
    inst = _instance(d)
    m, n = m_sum(inst), n_sum(inst)
    return {"item": d, "passed": m == n, "m": m.to_text(), "n": n.to_text()}


def check_kr_dimension(d: dict) -> dict:
    """Sum_lambda M(1) dim V(lambda) = prod dim W, and M(1) = tensor multiplicity per lambda."""
    c = cartan(d["type"], d["rank"])
    nu = MultiPartition.of(d["nu"])
    values = full_partition_polynomial(c, nu)
    chars = [kr_character(a + 1, k, c.rank) for a, comp in enumerate(nu) for k in comp.parts]
    decomp = tensor_decompose(chars, c.rank)
    total = sum(v.eval_at_one() * dimension(lam) for lam, v in values.items())
    expected = prod(ch.at_one() for ch in chars)
    per_lambda = {lam: v.eval_at_one() for lam, v in values.items()}
    mismatch = [list(w.coords) for w in set(per_lambda) | set(decomp.multiplicities)
                if per_lambda.get(w, 0) != decomp[w]]
    return {"item": d, "passed": total == expected and not mismatch,
            "sum": total, "product": expected, "mismatched_lambdas": sorted(mismatch)}


def check_classical_ct(d: dict) -> dict:
    inst = _instance(d)
    res = stable_classical_constant_term(inst, _tables("classical", inst.cartan))
    target = n_sum(inst).eval_at_one()
    return {"item": d, "passed": res.stable and res.value == target,
            "value": res.value, "n_at_1": target, "k": res.k, "history": res.history}


def check_constant_term(d: dict) -> dict:
    inst = _instance(d)
    rep = verify_constant_term_identity(inst, _tables("quantum", inst.cartan))
    out = rep.to_dict()
    out["item"] = out.pop("instance")
    return out


def kostka_normalized(lam_partition, n: int) -> "object":
    """The Kostka side of the comparison.

    The measured normalization is the identity: M equals K_{lambda,(1^N)}(q)
    with the charge statistic, no inversion and no q-power shift.
    """
    return kostka_charge(lam_partition, n)


def check_kostka(d: dict) -> dict:
    """nu = N copies of omega_1: M_{nu,lambda} equals the normalized Kostka polynomial."""
    c = cartan(d["type"], d["rank"])
    n = d["N"]
    nu = [[1] * n] + [[] for _ in range(c.rank - 1)]
    rows = []
    ok = True
    for p in partitions(n):
        if len(p.parts) > c.rank + 1:
            continue
        lam = DominantWeight.from_partition(p.parts, c.rank)
        m = m_sum(FermionicInstance.build(c, nu, lam.coords))
        k = kostka_normalized(p.parts, n)
        ok = ok and m == k
        rows.append({"partition": list(p.parts), "m": m.to_text(), "kostka": k.to_text()})
    return {"item": d, "passed": ok, "values": rows}


def check_characters(d: dict) -> dict:
    c = cartan(d["type"], d["rank"])
    solve_characters(c, d["k"])   # raises InvariantViolation on mismatch
    return {"item": d, "passed": True}


def check_laurent(d: dict) -> dict:
    c = cartan(d["type"], d["rank"])
    table = solve_symbolic(c, d["k"])
    table.check_relation()
    poly = polynomiality_check(table)
    return {"item": d, "passed": poly.passed, "checked": poly.checked, "failures": poly.failures}


def check_cluster_qsystem(d: dict) -> dict:
    c = cartan(d["type"], d["rank"])
    rep = laurent_audit(qsystem_seed(c), qsystem_sequence(c.rank, d["depth"]), d.get("budget"))
    return {"item": d, "passed": rep.passed, "status": rep.status, "max_terms": rep.max_terms}


def check_cluster_random(d: dict) -> dict:
    B = d["matrix"]
    rng = random.Random(d["sequence_seed"])
    n = len(B)
    seq, last = [], None
    for _ in range(d["depth"]):
        j = rng.choice([x for x in range(1, n + 1) if x != last])
        seq.append(j)
        last = j
    rep = laurent_audit(initial_seed(B), seq, d.get("budget"))
    probe = None
    if rep.status == "budget-exceeded":
        # undecided exactly: gather one-sided modular evidence instead
        pr = modular_probe(B, seq, random.Random(d["sequence_seed"]))
        probe = {"status": pr.status, "max_degree_span": pr.max_degree_span, "stopped_at": pr.failed_at}
    return {"item": d, "passed": rep.passed, "status": rep.status, "sequence": seq,
            "max_terms": rep.max_terms, "counterexample": rep.counterexample, "probe": probe}


def check_quantum(d: dict) -> dict:
    c = cartan(d["type"], d["rank"])
    table = solve_quantum(c, d["k"], verify=False)
    out = {
        "relation": table.relation_failures(),
        "commutation": table.commutation_failures(),
        "same_level": table.same_level_failures(),
        "classical_limit": table.classical_limit_failures(),
        "polynomiality": quantum_polynomiality(table).failures,
    }
    return {"item": d, "passed": not any(out.values()), **out}


def random_quiver_matrices(count: int, seed: int, max_size: int = 4, bound: int = 2) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, max_size)
        out.append(random_exchange_matrix(n, rng, bound).as_lists())
    return out


# ---------------------------------------------------------------------------
# suites


def _sweep_items(sweep: str) -> list:
    return [inst.describe() for inst in sweep_instances(sweep)]


def _nu_items(sweep: str) -> list:
    seen, out = set(), []
    for inst in sweep_instances(sweep):
        d = {"type": inst.cartan.type, "rank": inst.rank, "nu": inst.nu.as_lists()}
        key = repr(d)
        if key not in seen:
            seen.add(key)
            out.append(d)
    return out


def _kostka_items(_sweep) -> list:
    return [{"type": "A", "rank": r, "N": n} for r in (1, 2) for n in range(1, 7)]


def _character_items(_sweep) -> list:
    return [{"type": "A", "rank": r, "k": 6} for r in (1, 2, 3)]


def _laurent_items(_sweep) -> list:
    return [{"type": "A", "rank": 1, "k": 8}, {"type": "A", "rank": 2, "k": 8},
            {"type": "A", "rank": 3, "k": 6}]


def _cluster_items(_sweep) -> list:
    return [{"type": "A", "rank": r, "depth": 8} for r in (1, 2, 3)]


def random_cluster_items(count: int = 50, seed: int = 0, depth: int = 8,
                         budget: int | None = 4_000_000) -> list:
    """Random rank <= 4 quivers with entries in [-2, 2], each with its own sequence seed."""
    return [{"matrix": B, "sequence_seed": seed * 1000 + i, "depth": depth, "budget": budget}
            for i, B in enumerate(random_quiver_matrices(count, seed))]


def _random_cluster_items(_sweep) -> list:
    return random_cluster_items()


def _quantum_items(_sweep) -> list:
    return [{"type": "A", "rank": 1, "k": 6}, {"type": "A", "rank": 2, "k": 5}]


# name -> (item builder, checker, uses sweep)
SUITES = {
    "m-equals-n": (_sweep_items, check_m_equals_n, True),
    "kr-dimension": (_nu_items, check_kr_dimension, True),
    "classical-ct": (_sweep_items, check_classical_ct, True),
    "constant-term": (_sweep_items, check_constant_term, True),
    "kostka": (_kostka_items, check_kostka, False),
    "characters": (_character_items, check_characters, False),
    "laurent": (_laurent_items, check_laurent, False),
    "cluster": (_cluster_items, check_cluster_qsystem, False),
    "cluster-random": (_random_cluster_items, check_cluster_random, False),
    "quantum": (_quantum_items, check_quantum, False),
}


def run_checks(check, items: list, jobs: int = 1) -> list:
    """Apply ``check`` to every item, in order; a process pool when jobs > 1."""
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(check, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [check(d) for d in items]


def run_suite(name: str, sweep: str = "small", jobs: int = 1) -> SuiteResult:
    """Run a suite; rows come back in item order whatever ``jobs`` is."""
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    build, check, _ = SUITES[name]
    res = SuiteResult(name, run_checks(check, build(sweep), jobs))
    log.info("suite %s: %d rows, %d failures", name, len(res.rows), len(res.failures))
    return res
