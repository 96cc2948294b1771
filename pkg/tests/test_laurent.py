import pytest
from hypothesis import given, strategies as st

from qfermion.errors import NotDivisible
from qfermion.laurent import Laurent, MultiLaurent, laurent_eval_at_one

coeffs = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=6)
laurents = coeffs.map(Laurent)
multi = st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
                        st.integers(-4, 4), max_size=5).map(lambda d: MultiLaurent(2, d))


@pytest.mark.parametrize("poly,value", [
    (Laurent({0: 1, 1: 1, 2: 2, 3: 1, 4: 1}), 6),
    (Laurent(0), 0),
    (Laurent({-1: 1, 1: 1}), 2),
])
def test_eval_at_one(poly, value):
    assert laurent_eval_at_one(poly) == value
    assert poly.eval_at_one() == value


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Laurent(0)


@given(laurents)
def test_text_round_trip(a):
    assert Laurent.parse(a.to_text()) == a
    assert Laurent.parse(a.to_text("t"), "t") == a


@given(laurents, laurents.filter(bool))
def test_exact_division_round_trip(a, b):
    assert (a * b).divide_exact(b) == a


def test_not_divisible():
    with pytest.raises(NotDivisible):
        Laurent({0: 1}).divide_exact(Laurent({0: 1, 1: 1}))


def test_shift_and_scale():
    p = Laurent({0: 1, 2: 3})
    assert p.shift(-1) == Laurent({-1: 1, 1: 3})
    assert p.scale_exponents(-1) == Laurent({0: 1, -2: 3})


@given(multi, multi, multi)
def test_multi_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(multi)
def test_multi_text_round_trip(a):
    assert MultiLaurent.parse(a.to_text(["x", "y"]), ["x", "y"]) == a


@given(multi, multi, st.tuples(st.integers(1, 5), st.integers(-4, -1)))
def test_evaluation_is_a_homomorphism(a, b, point):
    assert (a * b).evaluate(point) == a.evaluate(point) * b.evaluate(point)
    assert (a + b).evaluate(point) == a.evaluate(point) + b.evaluate(point)


@given(multi, multi.filter(bool))
def test_multi_exact_division(a, b):
    assert (a * b).divide_exact(b) == a


def test_multi_not_divisible():
    x, y = MultiLaurent.variable(0, 2), MultiLaurent.variable(1, 2)
    with pytest.raises(NotDivisible):
        MultiLaurent.const(2, 1).divide_exact(x + y)


def test_substitute():
    x, y = MultiLaurent.variable(0, 2), MultiLaurent.variable(1, 2)
    f = x * x - y
    assert f.substitute([x + y, y]) == x * x + 2 * x * y + y * y - y


def test_specialize_drops_to_constants():
    x, y = MultiLaurent.variable(0, 2), MultiLaurent.variable(1, 2)
    f = x * y + 3 * y
    assert f.specialize({0: 1}) == 4 * y


def test_immutable():
    p = Laurent({1: 1})
    with pytest.raises(AttributeError):
        p.foo = 1
