"""Command-line interface.

Every invocation becomes a JobSpec (command, params, output format) that is
validated against a JSON schema before it runs.  Handlers return a JSON-ready
document; plain output is rendered from that same document, so cached and
fresh runs print identical bytes.

Exit status: 0 success, 2 usage or domain error, 3 verification failure,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from dataclasses import dataclass, field
from typing import Callable

import jsonschema

from . import __version__
from .cache import NullCache, cached_qtable, cached_quantum_table, canonical_json, default_cache
from .cartan import cartan
from .charring import kostka_charge, kostka_cocharge
from .cluster import ExchangeMatrix, initial_seed, laurent_audit, mutate_sequence, qsystem_seed, qsystem_sequence
from .errors import DomainError, InadmissibleWeight, InvariantViolation, QFermionError, VerificationFailure
from .fermionic import FermionicInstance, full_partition_polynomial, m_sum, n_sum
from .genfunc import generating_function_truncated
from .qseries import q_binomial
from .qsystem import seed_names, solve_characters
from .quantum import TailExponent, stable_constant_term, verify_constant_term_identity
from .verification import SUITES, check_cluster_random, random_cluster_items, run_checks, run_suite

__all__ = ["JobSpec", "JOB_SCHEMA", "OUTPUT_SCHEMA", "CACHE_ENTRY_SCHEMA", "schema_documents", "run", "build_parser", "main", "EXIT_OK", "EXIT_USAGE",
           "EXIT_VERIFICATION", "EXIT_INVARIANT"]

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, EXIT_INVARIANT = 0, 2, 3, 4

# ---------------------------------------------------------------------------
# schema

_INT = {"type": "integer"}
_NAT = {"type": "integer", "minimum": 0}
_POS = {"type": "integer", "minimum": 1}
_TYPE = {"type": "string", "enum": ["A", "D", "E"]}
_NU = {"type": "array", "items": {"type": "array", "items": _POS}}
_LAMBDA = {"type": "array", "items": _NAT}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "items": _INT}}


def _obj(required: list, **props) -> dict:
    return {"type": "object", "properties": props, "required": required, "additionalProperties": False}


PARAM_SCHEMAS = {
    "qbinom": _obj(["p", "m"], p=_INT, m=_NAT, mode={"enum": ["M", "N"]}),
    "msum": _obj(["type", "rank", "nu", "lambda"], type=_TYPE, rank=_POS, nu=_NU, **{"lambda": _LAMBDA}),
    "nsum": _obj(["type", "rank", "nu", "lambda"], type=_TYPE, rank=_POS, nu=_NU, **{"lambda": _LAMBDA}),
    "zfull": _obj(["type", "rank", "nu"], type=_TYPE, rank=_POS, nu=_NU),
    "qsys": _obj(["type", "rank", "k"], type=_TYPE, rank=_POS, k=_POS),
    "qsys-chars": _obj(["type", "rank", "k"], type=_TYPE, rank=_POS, k=_POS),
    "cluster-mutate": _obj(["sequence"], matrix=_MATRIX, type=_TYPE, rank=_POS,
                           sequence={"type": "array", "items": _POS}),
    "laurent-audit": _obj([], matrix=_MATRIX, type=_TYPE, rank=_POS, depth=_NAT,
                          sequence={"type": "array", "items": _POS},
                          random=_NAT, seed=_INT, budget=_POS),
    "quantum-solve": _obj(["type", "rank", "k"], type=_TYPE, rank=_POS, k=_POS),
    "quantum-ct": _obj(["type", "rank", "nu", "lambda"], type=_TYPE, rank=_POS, nu=_NU,
                       tail={"enum": [TailExponent.ELL, TailExponent.ROOT]}, **{"lambda": _LAMBDA}),
    "verify": _obj(["suite"], suite={"enum": sorted(SUITES)}, sweep={"type": "string"}),
    "kostka": _obj(["partition", "n"], partition={"type": "array", "items": _POS}, n=_NAT,
                   statistic={"enum": ["charge", "cocharge"]}),
    "gfun": _obj(["type", "rank", "max_boxes", "max_rows"], type=_TYPE, rank=_POS, max_boxes=_NAT,
                 max_rows=_NAT, z_mode={"enum": ["dimension", "character"]}),
}

JOB_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "qfermion JobSpec",
    "type": "object",
    "properties": {
        "command": {"enum": sorted(PARAM_SCHEMAS)},
        "params": {"type": "object"},
        "output": {"enum": ["plain", "json"]},
    },
    "required": ["command", "params", "output"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"command": {"const": name}}},
         "then": {"properties": {"params": schema}}}
        for name, schema in sorted(PARAM_SCHEMAS.items())
    ],
}


@dataclass(frozen=True)
class JobSpec:
    command: str
    params: dict = field(default_factory=dict)
    output: str = "plain"

    def validate(self) -> None:
        try:
            jsonschema.validate({"command": self.command, "params": self.params, "output": self.output},
                                JOB_SCHEMA)
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path)
            raise DomainError(f"invalid job ({path or 'root'}): {exc.message}") from None


@dataclass
class Outcome:
    doc: dict
    status: int = EXIT_OK


# ---------------------------------------------------------------------------
# handlers: params -> JSON document

OUTPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "qfermion output document",
    "type": "object",
    "properties": {
        "command": {"enum": sorted(PARAM_SCHEMAS)},
        "params": {"type": "object"},
        "version": {"type": "string"},
        "result": {"type": "object"},
    },
    "required": ["command", "params", "version", "result"],
    "additionalProperties": False,
}

_HEX64 = {"type": "string", "pattern": "^[0-9a-f]{64}$"}

CACHE_ENTRY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "qfermion cache entry",
    "type": "object",
    "properties": {"version": {"type": "string"}, "key": _HEX64, "checksum": _HEX64, "payload": {}},
    "required": ["version", "key", "checksum", "payload"],
    "additionalProperties": False,
}


def schema_documents() -> dict[str, str]:
    """File name -> text of the JSON schemas shipped under docs/schemas."""
    docs = {"jobspec.schema.json": JOB_SCHEMA, "output.schema.json": OUTPUT_SCHEMA,
            "cache-entry.schema.json": CACHE_ENTRY_SCHEMA}
    return {name: json.dumps(doc, sort_keys=True, indent=2) + "\n" for name, doc in docs.items()}


def _cartan(p):
    return cartan(p["type"], p["rank"])


def _instance(p) -> FermionicInstance:
    return FermionicInstance.build(_cartan(p), p["nu"], p["lambda"])


def _h_qbinom(p, ctx):
    return {"value": q_binomial(p["p"], p["m"], p.get("mode", "M")).to_text("q")}


def _h_msum(p, ctx):
    return {"value": m_sum(_instance(p)).to_text("q")}


def _h_nsum(p, ctx):
    return {"value": n_sum(_instance(p)).to_text("q")}


def _h_zfull(p, ctx):
    values = full_partition_polynomial(_cartan(p), p["nu"])
    return {"values": [{"lambda": list(lam.coords), "value": v.to_text("q")}
                       for lam, v in sorted(values.items(), key=lambda kv: kv[0].coords)]}


def _table_rows(entries, render) -> list:
    return [{"a": a + 1, "k": k, "value": render(v)}
            for (a, k), v in sorted(entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))]


def _h_qsys(p, ctx):
    table = cached_qtable(_cartan(p), p["k"], ctx.cache)
    names = seed_names(p["rank"])
    return {"variables": names, "entries": _table_rows(table.entries, lambda v: v.to_text(names))}


def _h_qsys_chars(p, ctx):
    table = solve_characters(_cartan(p), p["k"])
    return {"variables": [f"z{i + 1}" for i in range(p["rank"] + 1)],
            "entries": _table_rows(table, lambda v: v.to_text())}


def _seed_from(p):
    if "matrix" in p:
        return initial_seed(ExchangeMatrix(tuple(map(tuple, p["matrix"]))))
    if "type" in p and "rank" in p:
        return qsystem_seed(_cartan(p))
    raise DomainError("give either a matrix or a Cartan type and rank")


def _h_cluster_mutate(p, ctx):
    seed = _seed_from(p)
    n = seed.size
    names = [f"x{i + 1}" for i in range(n)]
    final = mutate_sequence(seed, p["sequence"])
    return {"matrix": final.B.as_lists(), "cluster": [x.to_text(names) for x in final.cluster],
            "history": list(final.history)}


def _h_laurent_audit(p, ctx):
    if "random" in p:
        items = random_cluster_items(p["random"], p.get("seed", 0), p.get("depth", 8),
                                     p.get("budget", 4_000_000))
        rows = run_checks(check_cluster_random, items, ctx.jobs)
        counts: dict = {}
        for r in rows:
            counts[r["status"]] = counts.get(r["status"], 0) + 1
        passed = all(r["passed"] for r in rows)
        return Outcome({"passed": passed, "counts": counts,
                        "rows": [{"matrix": r["item"]["matrix"], "sequence": r["sequence"],
                                  "status": r["status"], "max_terms": r["max_terms"], "probe": r["probe"]}
                                 for r in rows]},
                       EXIT_OK if passed else EXIT_VERIFICATION)
    seed = _seed_from(p)
    if "sequence" in p:
        seq = p["sequence"]
    elif "type" in p and "matrix" not in p:
        seq = qsystem_sequence(p["rank"], p.get("depth", 8))
    else:
        raise DomainError("a matrix audit needs an explicit sequence")
    rep = laurent_audit(seed, seq, p.get("budget"))
    doc = rep.to_dict()
    for step in doc["steps"]:
        step.pop("seconds")   # keep output deterministic
    return Outcome(doc, EXIT_OK if rep.passed else EXIT_VERIFICATION)


def _h_quantum_solve(p, ctx):
    table = cached_quantum_table(_cartan(p), p["k"], ctx.cache)
    return {"variables": table.torus.names(), "lambda": [list(r) for r in table.torus.Lambda],
            "entries": _table_rows(table.entries, lambda v: v.to_text())}


def _h_quantum_ct(p, ctx):
    inst = _instance(p)
    tail = p.get("tail", TailExponent.ELL)
    if not inst.is_admissible():
        raise InadmissibleWeight(f"lambda {p['lambda']} is not admissible for nu {p['nu']}")
    table = cached_quantum_table(inst.cartan, 2, ctx.cache)
    if tail == TailExponent.ELL:
        rep = verify_constant_term_identity(inst, table, tail)
        doc = rep.to_dict()
        doc.pop("instance")
        return Outcome(doc, EXIT_OK if rep.passed else EXIT_VERIFICATION)
    res = stable_constant_term(inst, table, tail)
    return {"bracket": res.value.to_text("t") if res.value is not None else "", "k": res.k,
            "stable": res.stable}


def _h_verify(p, ctx):
    res = run_suite(p["suite"], p.get("sweep", "small"), ctx.jobs)
    doc = res.to_dict()
    doc["sweep"] = p.get("sweep", "small") if SUITES[p["suite"]][2] else None
    return Outcome(doc, EXIT_OK if res.passed else EXIT_VERIFICATION)


def _h_kostka(p, ctx):
    f = kostka_cocharge if p.get("statistic", "charge") == "cocharge" else kostka_charge
    return {"value": f(p["partition"], p["n"]).to_text("q")}


def _h_gfun(p, ctx):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = generating_function_truncated(_cartan(p), p["max_boxes"], p["max_rows"],
                                          p.get("z_mode", "dimension"))
    return g.to_dict()


@dataclass
class _Context:
    cache: object
    jobs: int = 1


HANDLERS: dict[str, Callable] = {
    "qbinom": _h_qbinom,
    "msum": _h_msum,
    "nsum": _h_nsum,
    "zfull": _h_zfull,
    "qsys": _h_qsys,
    "qsys-chars": _h_qsys_chars,
    "cluster-mutate": _h_cluster_mutate,
    "laurent-audit": _h_laurent_audit,
    "quantum-solve": _h_quantum_solve,
    "quantum-ct": _h_quantum_ct,
    "verify": _h_verify,
    "kostka": _h_kostka,
    "gfun": _h_gfun,
}

# whole-result caching for the expensive deterministic commands
CACHEABLE = {"qsys-chars", "quantum-ct", "gfun"}


def run(job: JobSpec, cache=None, jobs: int = 1) -> tuple[dict, int]:
    """Validate and execute ``job``; returns (document, exit status)."""
    job.validate()
    ctx = _Context(cache if cache is not None else NullCache(), jobs)
    handler = HANDLERS[job.command]

    def compute() -> dict:
        out = handler(job.params, ctx)
        if not isinstance(out, Outcome):
            out = Outcome(out)
        # JSON round trip so fresh and cached documents are the same objects
        return json.loads(canonical_json({"status": out.status, "doc": out.doc}))

    if job.command in CACHEABLE:
        res = ctx.cache.get_or_compute(job.command, job.params, compute)
    else:
        res = compute()
    doc = {"command": job.command, "params": job.params, "version": __version__, "result": res["doc"]}
    return doc, res["status"]


# ---------------------------------------------------------------------------
# rendering


def _plain(command: str, result: dict) -> str:
    if "value" in result and len(result) == 1:
        return result["value"]
    if command == "zfull":
        return "\n".join(f"{r['lambda']}: {r['value']}" for r in result["values"])
    if command in ("qsys", "qsys-chars", "quantum-solve"):
        return "\n".join(f"Q_{r['k']}^({r['a']}) = {r['value']}" for r in result["entries"])
    if command == "cluster-mutate":
        return "\n".join(f"x{i + 1} = {v}" for i, v in enumerate(result["cluster"]))
    if command == "verify":
        lines = []
        for r in result["rows"]:
            item = " ".join(f"{k}={json.dumps(v, separators=(',', ':'))}" for k, v in sorted(r["item"].items()))
            lines.append(f"{'pass' if r['passed'] else 'FAIL'}  {item}")
        lines.append(f"{result['suite']}: {result['count'] - result['failures']}/{result['count']} passed")
        return "\n".join(lines)
    if command == "gfun":
        return "\n".join(f"y={t['y']} q^{t['f1']}: {t['coefficient']}" for t in result["terms"])
    if command == "laurent-audit":
        if "counts" in result:
            return "\n".join(f"{r['status']}  {r['matrix']} {r['sequence']}"
                             + (f"  probe={r['probe']['status']}" if r["probe"] else "")
                             for r in result["rows"]) + \
                "\n" + " ".join(f"{k}={v}" for k, v in sorted(result["counts"].items()))
        return result["status"]
    if command == "quantum-ct":
        if "passed" in result:
            return (f"bracket = {result['bracket']}\nh = {result['h']}\nm_sum = {result['m_sum']}\n"
                    f"k = {result['k']}\nidentity {'holds' if result['passed'] else 'FAILS'}")
        return result["bracket"]
    return canonical_json(result)


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True)
    return _plain(doc["command"], doc["result"])


# ---------------------------------------------------------------------------
# argument parsing


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not valid JSON: {exc.msg}") from None


def _add_cartan(sp, need_lambda=False, need_nu=False):
    sp.add_argument("--type", default="A", help="Cartan type (A, D or E)")
    sp.add_argument("--rank", type=int, required=True)
    if need_nu:
        sp.add_argument("--nu", type=_json_arg, required=True, help='JSON list of partitions, e.g. "[[1,1]]"')
    if need_lambda:
        sp.add_argument("--lambda", dest="lam", type=_json_arg, required=True,
                        help='JSON list of Dynkin labels, e.g. "[0]"')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["plain", "json"], default="plain")
    common.add_argument("--no-cache", action="store_true", help="bypass the on-disk cache")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="qfermion", description="Fermionic sums and Q-systems, exactly.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("qbinom", parents=[common], help="q-binomial coefficient")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--mode", choices=["M", "N"], default="M")

    for name in ("msum", "nsum"):
        sp = sub.add_parser(name, parents=[common], help=f"fermionic {name[0].upper()}-sum")
        _add_cartan(sp, need_lambda=True, need_nu=True)

    sp = sub.add_parser("zfull", parents=[common], help="M_{nu,lambda}(q) for every admissible lambda")
    _add_cartan(sp, need_nu=True)

    for name in ("qsys", "qsys-chars", "quantum-solve"):
        sp = sub.add_parser(name, parents=[common])
        _add_cartan(sp)
        sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("cluster-mutate", parents=[common], help="apply a mutation sequence")
    sp.add_argument("--matrix", type=_json_arg)
    sp.add_argument("--type")
    sp.add_argument("--rank", type=int)
    sp.add_argument("--sequence", type=_json_arg, required=True)

    sp = sub.add_parser("laurent-audit", parents=[common], help="check the Laurent property along a sequence")
    sp.add_argument("--matrix", type=_json_arg)
    sp.add_argument("--type")
    sp.add_argument("--rank", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--sequence", type=_json_arg)
    sp.add_argument("--random", type=int, help="audit this many random quivers")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--budget", type=int)

    sp = sub.add_parser("quantum-ct", parents=[common], help="quantum constant term and identity check")
    _add_cartan(sp, need_lambda=True, need_nu=True)
    sp.add_argument("--tail", choices=[TailExponent.ELL, TailExponent.ROOT])

    sp = sub.add_parser("verify", parents=[common], help="run a verification suite")
    sp.add_argument("suite", choices=sorted(SUITES))
    sp.add_argument("--sweep")

    sp = sub.add_parser("kostka", parents=[common], help="Kostka polynomial K_{lambda,(1^N)}")
    sp.add_argument("--partition", type=_json_arg, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--statistic", choices=["charge", "cocharge"])

    sp = sub.add_parser("gfun", parents=[common], help="truncated generating function")
    _add_cartan(sp)
    sp.add_argument("--max-boxes", type=int, required=True)
    sp.add_argument("--max-rows", type=int, required=True)
    sp.add_argument("--z-mode", choices=["dimension", "character"])
    return parser


_COMMON = {"format", "no_cache", "jobs", "verbose", "command"}


def job_from_args(ns: argparse.Namespace) -> JobSpec:
    params = {}
    for key, value in vars(ns).items():
        if key in _COMMON or value is None:
            continue
        params["lambda" if key == "lam" else key] = value
    if "type" in params:
        params["type"] = str(params["type"]).upper()
    return JobSpec(ns.command, params, ns.format)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)   # exits 2 on usage errors
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if ns.jobs < 1:
            raise DomainError("--jobs must be >= 1")
        job = job_from_args(ns)
        doc, status = run(job, default_cache(not ns.no_cache), ns.jobs)
    except (DomainError, InadmissibleWeight) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except QFermionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except Exception:   # a bug, not bad input
        log.exception("unexpected failure")
        return EXIT_INVARIANT
    print(render(doc, job.output))
    return status


if __name__ == "__main__":
    sys.exit(main())
