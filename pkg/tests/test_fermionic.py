import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from qfermion.cartan import cartan
from qfermion.charring import dimension, kr_character, tensor_decompose
from qfermion.errors import ConfigurationError, InadmissibleWeight
from qfermion.fermionic import (FermionicInstance, RowReading, admissible_weights, configurations,
                                full_partition_polynomial, linearized_partition_function, m_sum, n_sum,
                                particle_numbers, quadratic_form, rows, vacancy_numbers)
from qfermion.laurent import Laurent
from qfermion.partitions import DominantWeight, MultiPartition

A1, A2, A3 = cartan("A", 1), cartan("A", 2), cartan("A", 3)
q = Laurent.monomial(1)


def inst(c, nu, lam):
    return FermionicInstance.build(c, nu, lam)


def test_particle_numbers():
    assert particle_numbers(inst(A1, [[1, 1]], [0])) == (1,)
    assert particle_numbers(inst(A1, [[1, 1]], [2])) == (0,)
    with pytest.raises(InadmissibleWeight):
        particle_numbers(inst(A1, [[1, 1]], [1]))
    assert not inst(A1, [[1, 1]], [1]).is_admissible()


def test_rank_mismatch():
    with pytest.raises(ConfigurationError):
        inst(A2, [[1]], [0, 0])


def test_rows_readings():
    assert rows((2, 1, 1)) == (3, 1)
    assert rows((2, 1, 1), RowReading.DIRECT) == (2, 1, 1)


def test_vacancy_examples():
    nu, mu = MultiPartition.of([[1, 1]]), MultiPartition.of([[1]])
    # direct parts: pi = (1 - 2, 1 - 0), only the first row is needed
    assert vacancy_numbers(nu, mu, A1, RowReading.DIRECT) == ((-1,),)
    # shipped reading: nu has one row of length 2
    assert vacancy_numbers(nu, mu, A1) == ((0,),)
    one = MultiPartition.of([[1], [1]])
    assert vacancy_numbers(one, one, A2) == ((0,), (0,))


def test_vacancy_empty_mu():
    nu = MultiPartition.of([[2, 1]])
    assert vacancy_numbers(nu, MultiPartition.empty(1), A1) == ((),)


def test_quadratic_form_examples():
    assert quadratic_form(MultiPartition.of([[1]]), A1) == 1
    assert quadratic_form(MultiPartition.of([[2, 1]]), A1) == 5
    assert quadratic_form(MultiPartition.of([[2, 1]]), A1, RowReading.DIRECT) == 5
    assert quadratic_form(MultiPartition.of([[1], [1]]), A2) == 1


def test_m_sum_examples():
    assert m_sum(inst(A1, [[1, 1]], [0])) == q
    assert m_sum(inst(A1, [[1, 1]], [2])) == Laurent(1)
    assert m_sum(inst(A1, [[1, 1, 1, 1]], [0])).eval_at_one() == 2
    assert m_sum(inst(A1, [[1, 1]], [1])) == Laurent(0)


def test_n_sum_examples():
    assert n_sum(inst(A1, [[1, 1]], [0])) == q
    assert n_sum(inst(A1, [[1, 1]], [2])) == Laurent(1)
    assert n_sum(inst(A1, [[1, 1]], [1])) == Laurent(0)


def test_full_partition_polynomial():
    full = full_partition_polynomial(A1, [[1, 1]])
    assert full == {DominantWeight((0,)): q, DominantWeight((2,)): Laurent(1)}
    assert sum(v.eval_at_one() * dimension(k) for k, v in full.items()) == 4
    assert linearized_partition_function(A1, [[1, 1]]) == q + 3
    assert full_partition_polynomial(A2, [[], []]) == {DominantWeight((0, 0)): Laurent(1)}


def test_admissible_weights():
    assert [w.coords for w in admissible_weights(A1, MultiPartition.of([[1, 1, 1]]))] == [(1,), (3,)]


def test_configurations_recompute():
    i = inst(A2, [[1, 1], [1]], [1, 0])
    for conf in configurations(i):
        assert conf.mu.weights == particle_numbers(i)
        assert conf.vacancy == vacancy_numbers(i.nu, conf.mu, A2)
        assert conf.energy == quadratic_form(conf.mu, A2)


def _oracle(c, nu):
    chars = [kr_character(a + 1, k, c.rank) for a, comp in enumerate(nu) for k in comp]
    return tensor_decompose(chars, c.rank)


@pytest.mark.parametrize("nu", [[[2]], [[3]], [[3, 1]], [[2, 1, 1]]])
def test_direct_reading_rejected(nu):
    # the direct-parts reading fails the tensor-product oracle somewhere
    dec = _oracle(A1, nu)
    bad = [w for w in admissible_weights(A1, MultiPartition.of(nu))
           if m_sum(FermionicInstance(A1, MultiPartition.of(nu), w), RowReading.DIRECT).eval_at_one() != dec[w]]
    good = [w for w in admissible_weights(A1, MultiPartition.of(nu))
            if m_sum(FermionicInstance(A1, MultiPartition.of(nu), w)).eval_at_one() != dec[w]]
    assert bad and not good


nus = st.sampled_from([A1, A2]).flatmap(lambda c: st.tuples(
    st.just(c), st.lists(st.lists(st.integers(1, 2), max_size=2), min_size=c.rank, max_size=c.rank)))


@settings(max_examples=25)
@given(nus)
def test_positive_and_m_equals_n(data):
    c, nu = data
    nu = [sorted(x, reverse=True) for x in nu]
    for lam in admissible_weights(c, MultiPartition.of(nu)):
        i = FermionicInstance(c, MultiPartition.of(nu), lam)
        m = m_sum(i)
        assert all(v >= 0 for _, v in m.items())
        assert m == n_sum(i)


@settings(max_examples=15)
@given(nus)
def test_sum_order_independent(data):
    # splitting the configuration set and adding the halves gives the same sum
    from qfermion.fermionic import fermionic_sum
    c, nu = data
    nu = [sorted(x, reverse=True) for x in nu]
    for lam in admissible_weights(c, MultiPartition.of(nu)):
        i = FermionicInstance(c, MultiPartition.of(nu), lam)
        mus = [conf.mu for conf in configurations(i)]
        halves = fermionic_sum(i, mus=mus[::2]) + fermionic_sum(i, mus=mus[1::2])
        assert halves == m_sum(i) == fermionic_sum(i, mus=list(reversed(mus)))
