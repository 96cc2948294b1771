import warnings
from fractions import Fraction

import pytest

from qfermion.cartan import cartan
from qfermion.errors import ConfigurationError
from qfermion.genfunc import (FractionalExponentWarning, bounded_multipartitions, f1_exponent,
                              generating_function_truncated, y_monomial)
from qfermion.laurent import Laurent, MultiLaurent
from qfermion.partitions import MultiPartition

A1, A2 = cartan("A", 1), cartan("A", 2)


def test_bound_zero():
    g = generating_function_truncated(A1, 0, 0)
    assert len(g.terms) == 1
    assert g.terms[0].coefficient == Laurent(1) and g.terms[0].f1 == 0
    gc = generating_function_truncated(A2, 0, 0, "character")
    assert gc.terms[0].coefficient == MultiLaurent.const(4, 1)


def test_a1_terms():
    with pytest.warns(FractionalExponentWarning):
        g = generating_function_truncated(A1, 2, 2)
    assert [t.nu.as_lists() for t in g.terms] == [[[]], [[1]], [[1, 1]], [[2]]]
    by_nu = {tuple(map(tuple, t.nu.as_lists())): t for t in g.terms}
    assert by_nu[((1,),)].f1 == Fraction(3, 4) and by_nu[((1,),)].coefficient == Laurent(2)
    # C^2 x C^2 = V(2) + q V(0)
    assert by_nu[((1, 1),)].f1 == 2 and by_nu[((1, 1),)].coefficient == Laurent({0: 3, 1: 1})
    assert by_nu[((2,),)].f1 == 1 and by_nu[((2,),)].coefficient == Laurent(3)
    assert g.fractional and g.exponent_denominator == 4


def test_coefficient_lookup():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FractionalExponentWarning)
        g = generating_function_truncated(A1, 2, 2)
    nu = MultiPartition.of([[1, 1]])
    assert y_monomial(nu) == ((1, 1, 2),)
    assert g.coefficient([(1, 1, 2)]).nu == nu
    assert g.coefficient([(1, 3, 1)]) is None


def test_y_monomial_determines_nu():
    nus = bounded_multipartitions(2, 4, 3)
    assert len({y_monomial(nu) for nu in nus}) == len(nus)


def test_at_y():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FractionalExponentWarning)
        g = generating_function_truncated(A1, 2, 2)
    vals = g.at_y({(1, 1): 1})
    # nu = (1) and (1,1) survive, together with the empty nu
    assert vals == {Fraction(0): Laurent(1), Fraction(3, 4): Laurent(2), Fraction(2): Laurent({0: 3, 1: 1})}


def test_f1_a2_denominator():
    assert f1_exponent(A2, [[1], []]).denominator == 3


def test_character_mode_at_one_matches_dimension():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FractionalExponentWarning)
        gd = generating_function_truncated(A2, 2, 2)
        gc = generating_function_truncated(A2, 2, 2, "character")
    for td, tc in zip(gd.terms, gc.terms):
        assert tc.coefficient.specialize({1: 1, 2: 1, 3: 1}).drop([1, 2, 3]) == \
            MultiLaurent(1, {(e,): c for e, c in td.coefficient.items()})


def test_errors():
    with pytest.raises(ConfigurationError):
        generating_function_truncated(cartan("D", 4), 1, 1)
    with pytest.raises(ConfigurationError):
        generating_function_truncated(A1, 1, 1, "bogus")


def test_to_dict():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FractionalExponentWarning)
        d = generating_function_truncated(A1, 1, 1).to_dict()
    assert d["fractional"] and d["terms"][1]["f1"] == "3/4"
