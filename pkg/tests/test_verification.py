import pytest

from qfermion.errors import ConfigurationError
from qfermion.verification import (SUITES, check_m_equals_n, kostka_normalized, random_cluster_items,
                                   random_quiver_matrices, run_checks, run_suite)


def test_registry():
    assert {"m-equals-n", "kr-dimension", "classical-ct", "constant-term", "kostka", "characters",
            "laurent", "cluster", "cluster-random", "quantum"} == set(SUITES)


def test_unknown_suite():
    with pytest.raises(ConfigurationError):
        run_suite("nope")


def test_random_items_are_reproducible():
    assert random_quiver_matrices(10, 3) == random_quiver_matrices(10, 3)
    items = random_cluster_items(5, seed=2)
    assert [d["sequence_seed"] for d in items] == [2000, 2001, 2002, 2003, 2004]
    assert all(len(d["matrix"]) <= 4 and max(map(max, d["matrix"])) <= 2 for d in items)


def test_parallel_rows_in_order():
    items = [{"type": "A", "rank": 1, "nu": [[1] * n], "lambda": [n % 2]} for n in range(1, 7)]
    assert run_checks(check_m_equals_n, items, 2) == run_checks(check_m_equals_n, items, 1)


def test_kostka_normalization_is_identity():
    from qfermion.charring import kostka_charge
    assert kostka_normalized((2, 1), 3) == kostka_charge((2, 1), 3)


@pytest.mark.parametrize("suite", ["m-equals-n", "constant-term", "classical-ct", "kr-dimension"])
def test_small_sweep_suites(suite):
    res = run_suite(suite, "small")
    assert res.passed and res.to_dict()["count"] == len(res.rows)
