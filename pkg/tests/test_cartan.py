import pytest

from qfermion.cartan import cartan
from qfermion.errors import ConfigurationError

TYPES = [("A", r) for r in range(1, 7)] + [("D", 4), ("D", 5), ("D", 6), ("E", 6), ("E", 7), ("E", 8)]


def test_a1():
    c = cartan("A", 1)
    assert c.cartan == ((2,),)
    assert c.det == 2
    assert c.Lambda == ((1,),)


def test_a2():
    c = cartan("A", 2)
    assert c.cartan == ((2, -1), (-1, 2))
    assert c.det == 3
    assert c.Lambda == ((2, 1), (1, 2))


@pytest.mark.parametrize("t,r,det", [("A", 3, 4), ("A", 5, 6), ("D", 4, 4), ("D", 5, 4),
                                     ("E", 6, 3), ("E", 7, 2), ("E", 8, 1)])
def test_determinants(t, r, det):
    assert cartan(t, r).det == det


@pytest.mark.parametrize("t,r", TYPES)
def test_lambda_is_scaled_inverse(t, r):
    c = cartan(t, r)
    for i in range(r):
        for j in range(r):
            v = sum(c.Lambda[i][k] * c.cartan[k][j] for k in range(r))
            assert v == (c.det if i == j else 0)


@pytest.mark.parametrize("t,r", TYPES)
def test_symmetric(t, r):
    c = cartan(t, r)
    assert all(c.cartan[i][j] == c.cartan[j][i] for i in range(r) for j in range(r))


@pytest.mark.parametrize("t,r", [("A", 0), ("D", 3), ("E", 5), ("B", 2), ("A", -1)])
def test_rejected(t, r):
    with pytest.raises(ConfigurationError):
        cartan(t, r)


def test_inverse_apply():
    c = cartan("A", 3)
    assert c.apply(c.apply_inverse([1, 2, 3])) == (1, 2, 3)
