import json
import random
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from qfermion.cache import (CACHE_VERSION, NullCache, ResultCache, cache_key, cached_qtable, cached_quantum_table,
                            canonical_json, default_cache, dump_qtable, dump_quantum_table, load_qtable,
                            load_quantum_table)
from qfermion.cartan import cartan
from qfermion.errors import DomainError
from qfermion.laurent import Laurent
from qfermion.qsystem import solve_symbolic
from qfermion.quantum import TorusElement, build_torus, solve_quantum

payloads = st.recursive(
    st.none() | st.booleans() | st.integers() | st.text(max_size=8),
    lambda inner: st.lists(inner, max_size=4) | st.dictionaries(st.text(max_size=5), inner, max_size=4),
    max_leaves=12)


def test_put_get(tmp_path):
    c = ResultCache(tmp_path)
    c.put("msum", {"a": 1}, {"value": "q"})
    assert c.get("msum", {"a": 1}) == {"value": "q"}
    assert c.get("msum", {"a": 2}) is None


@settings(max_examples=50)
@given(payloads)
def test_payload_round_trip(tmp_path_factory, payload):
    c = ResultCache(tmp_path_factory.mktemp("c"))
    c.put("x", {"p": 1}, payload)
    assert c.get("x", {"p": 1}) == payload


def test_key_is_canonical():
    assert cache_key("c", {"a": 1, "b": 2}) == cache_key("c", {"b": 2, "a": 1})
    assert cache_key("c", {"a": 1}) != cache_key("c", {"a": 1}, version="other")
    assert canonical_json({"b": [1, 2], "a": "x"}) == '{"a":"x","b":[1,2]}'


def test_version_bump_misses(tmp_path):
    ResultCache(tmp_path, version=CACHE_VERSION).put("c", {}, 1)
    assert ResultCache(tmp_path, version="999").get("c", {}) is None


def test_checksum_mismatch_recomputes(tmp_path):
    c = ResultCache(tmp_path)
    c.put("c", {"n": 1}, {"v": 1})
    path = c.path_for(cache_key("c", {"n": 1}))
    entry = json.loads(path.read_text())
    entry["payload"] = {"v": 2}
    path.write_text(json.dumps(entry))
    calls = []
    with pytest.warns(RuntimeWarning, match="corrupt"):
        out = c.get_or_compute("c", {"n": 1}, lambda: calls.append(1) or {"v": 1})
    assert out == {"v": 1} and calls == [1]
    assert json.loads(path.read_text())["payload"] == {"v": 1}


def test_garbage_entry(tmp_path):
    c = ResultCache(tmp_path)
    path = c.path_for(cache_key("c", {}))
    path.parent.mkdir(parents=True)
    path.write_text("{not json")
    with pytest.warns(RuntimeWarning):
        assert c.get("c", {}) is None


def test_io_failure_warns_and_computes(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    c = ResultCache(blocker)   # a file where the directory should be
    with pytest.warns(RuntimeWarning) as rec:
        assert c.get_or_compute("c", {}, lambda: 42) == 42
    messages = " ".join(str(w.message) for w in rec)
    assert "read failed" in messages and "write failed" in messages


def test_null_cache():
    c = NullCache()
    c.put("c", {}, 1)
    assert c.get("c", {}) is None
    assert c.get_or_compute("c", {}, lambda: 5) == 5


def test_default_cache_env(cache_dir):
    c = default_cache()
    assert isinstance(c, ResultCache) and c.directory == cache_dir
    assert isinstance(default_cache(False), NullCache)


def test_no_temp_files_left(tmp_path):
    c = ResultCache(tmp_path)
    for i in range(5):
        c.put("c", {"i": i}, i)
    assert not list(tmp_path.rglob(".tmp-*"))


@pytest.mark.parametrize("rank,k", [(1, 5), (2, 4)])
def test_qtable_round_trip(rank, k):
    t = solve_symbolic(cartan("A", rank), k)
    text = dump_qtable(t)
    back = load_qtable(text)
    assert back.entries == t.entries
    assert dump_qtable(back) == text


@pytest.mark.parametrize("rank,k", [(1, 5), (2, 4)])
def test_quantum_table_round_trip(rank, k):
    t = solve_quantum(cartan("A", rank), k)
    text = dump_quantum_table(t)
    back = load_quantum_table(text)
    assert back.entries == t.entries
    assert dump_quantum_table(back) == text


def test_quantum_table_header_checked():
    text = dump_quantum_table(solve_quantum(cartan("A", 1), 2))
    with pytest.raises(DomainError):
        load_quantum_table(text.replace("theta [[0,1],[-1,0]]", "theta [[0,2],[-2,0]]"))
    with pytest.raises(DomainError):
        load_qtable(text)
    with pytest.raises(DomainError):
        load_quantum_table("garbage\n")


def test_cached_tables_equal_fresh(tmp_path):
    c = ResultCache(tmp_path)
    a2 = cartan("A", 2)
    first = cached_quantum_table(a2, 3, c)
    second = cached_quantum_table(a2, 3, c)
    assert first.entries == second.entries == solve_quantum(a2, 3).entries
    assert cached_qtable(a2, 3, c).entries == cached_qtable(a2, 3, c).entries == solve_symbolic(a2, 3).entries


def test_cached_table_unreadable_payload(tmp_path):
    c = ResultCache(tmp_path)
    a1 = cartan("A", 1)
    c.put("quantum-table", {"type": "A", "rank": 1, "k_max": 2}, "not a table")
    with pytest.warns(RuntimeWarning, match="unreadable"):
        t = cached_quantum_table(a1, 2, c)
    assert t.entries == solve_quantum(a1, 2).entries


exps = st.tuples(*[st.integers(-3, 3)] * 4)


@settings(max_examples=50)
@given(st.dictionaries(st.integers(-8, 8), st.integers(-20, 20), max_size=6),
       st.dictionaries(st.tuples(*[st.integers(-3, 3)] * 5), st.integers(-9, 9), max_size=5))
def test_value_text_round_trips(coeffs, terms):
    p = Laurent(coeffs)
    assert Laurent.parse(p.to_text("t"), "t") == p
    torus = build_torus(cartan("A", 2))
    x = TorusElement(torus, terms)
    assert TorusElement.parse(torus, x.to_text()) == x
