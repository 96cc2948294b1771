import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from qfermion import cli
from qfermion.cache import ResultCache
from qfermion.cli import (CACHE_ENTRY_SCHEMA, EXIT_INVARIANT, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION,
                          OUTPUT_SCHEMA, JobSpec, main, run, schema_documents)
from qfermion.errors import DomainError, InvariantViolation

ROOT = Path(__file__).resolve().parents[1]


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(autouse=True)
def _cache(cache_dir):
    return cache_dir


def test_msum_example(capsys):
    code, out, _ = call(capsys, "msum", "--type", "A", "--rank", "1", "--nu", "[[1,1]]", "--lambda", "[0]")
    assert code == EXIT_OK and out.strip() == "q"


def test_qbinom(capsys):
    code, out, _ = call(capsys, "qbinom", "--p", "2", "--m", "2", "--mode", "N")
    assert out.strip() == "1 + q + 2*q^2 + q^3 + q^4"


def test_kostka(capsys):
    assert call(capsys, "kostka", "--partition", "[2,1]", "--n", "3")[1].strip() == "q + q^2"


@pytest.mark.parametrize("argv", [
    ["msum", "--rank", "1", "--nu", "[[1,", "--lambda", "[0]"],        # not JSON
    ["msum", "--rank", "1", "--nu", "[[0]]", "--lambda", "[0]"],       # zero part
    ["msum", "--rank", "1", "--nu", '"x"', "--lambda", "[0]"],         # wrong shape
    ["msum", "--rank", "2", "--nu", "[[1]]", "--lambda", "[0,0]"],     # rank mismatch
    ["msum", "--rank", "1", "--nu", "[[1]]", "--lambda", "[-1]"],      # negative label
    ["qsys", "--type", "B", "--rank", "2", "--k", "2"],                # unsupported type
    ["quantum-ct", "--rank", "1", "--nu", "[[1,1]]", "--lambda", "[1]"],  # inadmissible
    ["verify", "constant-term", "--sweep", "nope"],                    # unknown sweep
    ["qbinom", "--p", "1", "--m", "2", "--jobs", "0"],
])
def test_usage_errors(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:   # argparse rejects before dispatch
        code = exc.code
    capsys.readouterr()
    assert code == EXIT_USAGE


def test_schema_rejects_extra_params():
    with pytest.raises(DomainError):
        run(JobSpec("qbinom", {"p": 1, "m": 1, "extra": 0}))
    with pytest.raises(DomainError):
        run(JobSpec("nothing", {}))


def test_verify_small_sweep(capsys):
    code, out, _ = call(capsys, "verify", "constant-term", "--sweep", "small")
    assert code == EXIT_OK
    assert "25/25" in out


def test_verification_failure_exit(capsys):
    code, out, _ = call(capsys, "laurent-audit", "--matrix", "[[0,2,-2],[-2,0,2],[2,-2,0]]",
                        "--sequence", "[1,2,3,1,2,3]", "--budget", "10", "--format", "json")
    assert code == EXIT_VERIFICATION
    assert json.loads(out)["result"]["status"] == "budget-exceeded"


def test_invariant_exit(capsys, monkeypatch):
    def boom(p, ctx):
        raise InvariantViolation("broken")
    monkeypatch.setitem(cli.HANDLERS, "msum", boom)
    code, _, err = call(capsys, "msum", "--rank", "1", "--nu", "[[1]]", "--lambda", "[1]")
    assert code == EXIT_INVARIANT and "invariant" in err


def test_unexpected_exception_exit(capsys, monkeypatch):
    monkeypatch.setitem(cli.HANDLERS, "msum", lambda p, ctx: 1 / 0)
    assert call(capsys, "msum", "--rank", "1", "--nu", "[[1]]", "--lambda", "[1]")[0] == EXIT_INVARIANT


def test_json_is_byte_identical(capsys):
    argv = ["quantum-ct", "--rank", "2", "--nu", "[[1],[1]]", "--lambda", "[0,0]", "--format", "json"]
    first = call(capsys, *argv)[1]
    second = call(capsys, *argv)[1]           # from the cache
    third = call(capsys, *argv, "--no-cache")[1]
    assert first == second == third
    doc = json.loads(first)
    jsonschema.validate(doc, OUTPUT_SCHEMA)
    assert doc["result"]["passed"]


def test_cache_entries_match_schema(capsys, cache_dir):
    call(capsys, "gfun", "--rank", "1", "--max-boxes", "2", "--max-rows", "2")
    files = list(cache_dir.rglob("*.json"))
    assert files
    for f in files:
        jsonschema.validate(json.loads(f.read_text()), CACHE_ENTRY_SCHEMA)


def test_jobs_do_not_change_output(capsys):
    one = call(capsys, "verify", "m-equals-n", "--sweep", "small", "--format", "json")[1]
    two = call(capsys, "verify", "m-equals-n", "--sweep", "small", "--format", "json", "--jobs", "2")[1]
    assert one == two


@pytest.mark.parametrize("argv", [
    ["zfull", "--rank", "1", "--nu", "[[1,1]]"],
    ["qsys", "--rank", "2", "--k", "3"],
    ["qsys-chars", "--rank", "1", "--k", "3"],
    ["quantum-solve", "--rank", "1", "--k", "3"],
    ["cluster-mutate", "--matrix", "[[0,1],[-1,0]]", "--sequence", "[1,2,1,2,1]"],
    ["laurent-audit", "--type", "A", "--rank", "2", "--depth", "4"],
    ["quantum-ct", "--rank", "1", "--nu", "[[1,1]]", "--lambda", "[2]", "--tail", "root"],
    ["gfun", "--rank", "1", "--max-boxes", "2", "--max-rows", "2", "--z-mode", "character"],
    ["nsum", "--rank", "2", "--nu", "[[1],[1]]", "--lambda", "[0,0]"],
])
def test_commands_run(capsys, argv):
    code, out, _ = call(capsys, *argv)
    assert code == EXIT_OK and out.strip()
    code, out, _ = call(capsys, *argv, "--format", "json")
    jsonschema.validate(json.loads(out), OUTPUT_SCHEMA)


def test_cluster_mutate_pentagon(capsys):
    out = call(capsys, "cluster-mutate", "--matrix", "[[0,1],[-1,0]]", "--sequence", "[1,2,1,2,1]",
               "--format", "json")[1]
    assert json.loads(out)["result"]["cluster"] == ["x2", "x1"]


def test_cache_transparency(tmp_path):
    job = JobSpec("quantum-ct", {"type": "A", "rank": 1, "nu": [[1, 1, 1]], "lambda": [1]}, "json")
    cache = ResultCache(tmp_path)
    fresh = run(job)
    assert run(job, cache) == fresh
    assert run(job, cache) == fresh


def test_schemas_in_docs_are_current():
    for name, text in schema_documents().items():
        assert (ROOT / "docs" / "schemas" / name).read_text() == text


def test_module_entry_point(cache_dir):
    proc = subprocess.run([sys.executable, "-m", "qfermion", "msum", "--rank", "1", "--nu", "[[1,1]]",
                           "--lambda", "[2]"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
