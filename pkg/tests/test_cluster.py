import random

import pytest
from hypothesis import given, settings, strategies as st

from qfermion.cartan import cartan
from qfermion.cluster import (PROBE_PRIME, ExchangeMatrix, Seed, _pinv, _pmul, _udiv, _ULaurent, initial_seed,
                              laurent_audit, modular_probe, mutate, mutate_sequence, plus_to_minus,
                              qsystem_entries_from_cluster, qsystem_seed, qsystem_sequence,
                              random_exchange_matrix)
from qfermion.errors import DomainError
from qfermion.laurent import MultiLaurent
from qfermion.qsystem import solve_symbolic

NAMES = ["x1", "x2"]


def test_skew_symmetry_required():
    with pytest.raises(DomainError):
        ExchangeMatrix(((0, 1), (1, 0)))
    with pytest.raises(DomainError):
        ExchangeMatrix(((0, 1),))


def test_single_mutation():
    s = mutate(initial_seed([[0, 1], [-1, 0]]), 1)
    assert s.cluster[0] == MultiLaurent.parse("(1 + x2) * x1^-1", NAMES)
    assert s.cluster[1] == MultiLaurent.parse("x2", NAMES)
    assert s.B.as_lists() == [[0, -1], [1, 0]]


def test_direction_range():
    with pytest.raises(DomainError):
        mutate(initial_seed([[0, 1], [-1, 0]]), 3)


def test_pentagon():
    # five alternating mutations return the initial cluster with its two slots swapped
    s0 = initial_seed([[0, 1], [-1, 0]])
    s5 = mutate_sequence(s0, [1, 2, 1, 2, 1])
    assert s5.cluster == (s0.cluster[1], s0.cluster[0])
    s10 = mutate_sequence(s0, [1, 2, 1, 2, 1, 2, 1, 2, 1, 2])
    assert s10.same_as(s0)


matrices = st.integers(2, 4).flatmap(
    lambda n: st.integers(0, 10 ** 6).map(lambda seed: random_exchange_matrix(n, random.Random(seed))))


@settings(max_examples=30)
@given(matrices, st.data())
def test_mutation_is_involution(B, data):
    j = data.draw(st.integers(1, B.size))
    s0 = initial_seed(B)
    s2 = mutate(mutate(s0, j), j)
    assert s2.same_as(s0)
    assert B.mutate(j - 1).mutate(j - 1) == B


@settings(max_examples=30)
@given(matrices, st.data())
def test_matrix_mutation_stays_skew(B, data):
    j = data.draw(st.integers(0, B.size - 1))
    M = B.mutate(j)   # the constructor rejects non-skew results
    assert all(M[i, i] == 0 for i in range(M.size))


def test_qsystem_seed_a1():
    s = qsystem_seed(cartan("A", 1))
    assert s.B.as_lists() == [[0, -2], [2, 0]]


def test_qsystem_sequence():
    assert qsystem_sequence(2, 3) == [1, 2, 3, 4, 1, 2]


@pytest.mark.parametrize("c,k", [(cartan("A", 1), 6), (cartan("A", 2), 5), (cartan("A", 3), 4)])
def test_cluster_realises_qsystem(c, k):
    plus = qsystem_entries_from_cluster(c, k)
    minus = solve_symbolic(c, k)
    for (a, kk), val in plus.items():
        assert plus_to_minus(val, a, c) == minus[(a, kk)]


def test_audit_qsystem_seed():
    c = cartan("A", 2)
    rep = laurent_audit(qsystem_seed(c), qsystem_sequence(2, 6))
    assert rep.passed and len(rep.steps) == 12
    assert rep.to_dict()["status"] == "laurent"


def test_audit_empty_sequence():
    rep = laurent_audit(initial_seed([[0, 1], [-1, 0]]), [])
    assert rep.passed and rep.max_terms == 0


def test_audit_budget():
    rep = laurent_audit(initial_seed([[0, 2, -2], [-2, 0, 2], [2, -2, 0]]), [1, 2, 3, 1, 2, 3], budget=10)
    assert rep.status == "budget-exceeded" and not rep.passed
    assert rep.counterexample["reason"]


def test_audit_reports_non_laurent_seed():
    # a hand-made seed whose cluster is not a mutation of the initial one
    x1, x2 = MultiLaurent.variable(0, 2), MultiLaurent.variable(1, 2)
    bad = Seed(ExchangeMatrix(((0, 1), (-1, 0))), (x1 + x2, x2))
    rep = laurent_audit(bad, [1])
    assert rep.status == "not-laurent"
    assert rep.counterexample["direction"] == 1


def test_pmul_matches_naive():
    rng = random.Random(1)
    p = PROBE_PRIME
    for _ in range(20):
        a = [rng.randrange(p) for _ in range(rng.randint(1, 30))]
        b = [rng.randrange(p) for _ in range(rng.randint(1, 30))]
        naive = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                naive[i + j] = (naive[i + j] + x * y) % p
        assert _pmul(a, b, p) == naive


def test_pinv_is_series_inverse():
    rng = random.Random(2)
    p = PROBE_PRIME
    f = [rng.randrange(1, p)] + [rng.randrange(p) for _ in range(20)]
    g = _pinv(f, 25, p)
    prod = _pmul(f, g, p)[:25]
    assert prod == [1] + [0] * 24


def test_udiv():
    p = PROBE_PRIME
    a = _ULaurent.make(-2, [1, 3, 2])      # q^-2 (1 + q)(1 + 2q)
    b = _ULaurent.make(0, [1, 1])
    assert _udiv(a, b, p) == _ULaurent.make(-2, [1, 2])
    assert _udiv(_ULaurent.make(0, [1]), b, p) is None
    assert _udiv(_ULaurent.make(0, [1, 0, 1]), b, p) is None


def test_probe_on_qsystem_seed():
    c = cartan("A", 2)
    B = qsystem_seed(c).B
    rep = modular_probe(B, qsystem_sequence(2, 8), random.Random(0))
    assert rep.consistent and rep.max_degree_span > 0


def test_probe_budget():
    B = [[0, 2, -2], [-2, 0, 2], [2, -2, 0]]
    rep = modular_probe(B, [1, 2, 3] * 4, random.Random(0), max_span=5)
    assert rep.status == "budget-exceeded" and not rep.consistent
