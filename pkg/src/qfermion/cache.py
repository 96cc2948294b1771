"""Content-addressed result cache and canonical table serialization.

The cache is advisory: a missing, unreadable or corrupt entry is a miss and
the caller recomputes.  Keys hash the command, its canonical parameters and
the cache version, so a version bump invalidates everything.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import warnings
from pathlib import Path
from typing import Any, Callable

from .cartan import CartanData, cartan as make_cartan
from .errors import DomainError
from .laurent import MultiLaurent
from .qsystem import QTable, seed_names, solve_symbolic
from .quantum import QuantumQTable, QuantumTorus, TorusElement, solve_quantum

__all__ = [
    "CACHE_VERSION",
    "CACHE_ENV",
    "canonical_json",
    "cache_key",
    "ResultCache",
    "NullCache",
    "default_cache",
    "dump_qtable",
    "load_qtable",
    "dump_quantum_table",
    "load_quantum_table",
    "cached_quantum_table",
    "cached_qtable",
]

log = logging.getLogger(__name__)

CACHE_VERSION = "1"
CACHE_ENV = "QFERMION_CACHE_DIR"
TABLE_FORMAT = "qfermion-table/1"


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def cache_key(command: str, params: dict, version: str = CACHE_VERSION) -> str:
    return _sha256(canonical_json({"command": command, "params": params, "version": version}))


class NullCache:
    """Cache that never stores anything."""

    enabled = False

    def get(self, command: str, params: dict):
        return None

    def put(self, command: str, params: dict, payload) -> None:
        return None

    def get_or_compute(self, command: str, params: dict, compute: Callable[[], Any]):
        return compute()


class ResultCache:
    """JSON payloads on disk, one file per key, written atomically."""

    enabled = True

    def __init__(self, directory: str | os.PathLike, version: str = CACHE_VERSION):
        self.directory = Path(directory)
        self.version = version

    def path_for(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, command: str, params: dict):
        key = cache_key(command, params, self.version)
        path = self.path_for(key)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        except OSError as exc:
            warnings.warn(f"cache read failed for {path}: {exc}", RuntimeWarning, stacklevel=2)
            return None
        try:
            entry = json.loads(raw)
            payload = entry["payload"]
            ok = (entry["version"] == self.version and entry["key"] == key
                  and entry["checksum"] == _sha256(canonical_json(payload)))
        except (ValueError, KeyError, TypeError):
            ok = False
        if not ok:
            warnings.warn(f"corrupt cache entry {path}; recomputing", RuntimeWarning, stacklevel=2)
            return None
        return payload

    def put(self, command: str, params: dict, payload) -> None:
        key = cache_key(command, params, self.version)
        path = self.path_for(key)
        entry = {"version": self.version, "key": key,
                 "checksum": _sha256(canonical_json(payload)), "payload": payload}
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(canonical_json(entry))
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as exc:
            warnings.warn(f"cache write failed for {path}: {exc}", RuntimeWarning, stacklevel=2)

    def get_or_compute(self, command: str, params: dict, compute: Callable[[], Any]):
        hit = self.get(command, params)
        if hit is not None:
            log.debug("cache hit %s %s", command, params)
            return hit
        payload = compute()
        self.put(command, params, payload)
        return payload


def default_cache(enabled: bool = True):
    if not enabled:
        return NullCache()
    root = os.environ.get(CACHE_ENV) or os.path.join(Path.home(), ".cache", "qfermion")
    return ResultCache(root)


# ---------------------------------------------------------------------------
# table text format


def _header(kind: str, cartan: CartanData, k_max: int, theta) -> list[str]:
    return [
        TABLE_FORMAT,
        f"kind {kind}",
        f"type {cartan.type}",
        f"rank {cartan.rank}",
        f"k_max {k_max}",
        f"theta {canonical_json([list(row) for row in theta])}",
    ]


def _read_header(text: str, kind: str):
    lines = text.splitlines()
    if len(lines) < 6 or lines[0] != TABLE_FORMAT:
        raise DomainError("not a qfermion table (bad header)")
    fields = {}
    for line in lines[1:6]:
        name, _, value = line.partition(" ")
        fields[name] = value
    if fields.get("kind") != kind:
        raise DomainError(f"expected a {kind} table, found {fields.get('kind')!r}")
    cartan = make_cartan(fields["type"], int(fields["rank"]))
    entries = []
    for line in lines[6:]:
        if not line:
            continue
        tag, a, k, body = line.split(" ", 3)
        if tag != "entry":
            raise DomainError(f"unexpected line {line!r}")
        entries.append((int(a) - 1, int(k), body))
    return cartan, int(fields["k_max"]), json.loads(fields["theta"]), entries


def dump_qtable(table: QTable) -> str:
    r = table.cartan.rank
    names = seed_names(r)
    zero = [[0] * (2 * r) for _ in range(2 * r)]
    lines = _header("classical", table.cartan, table.k_max, zero)
    for (a, k) in sorted(table.entries, key=lambda ak: (ak[1], ak[0])):
        lines.append(f"entry {a + 1} {k} {table.entries[(a, k)].to_text(names)}")
    return "\n".join(lines) + "\n"


def load_qtable(text: str) -> QTable:
    cartan, k_max, _, entries = _read_header(text, "classical")
    names = seed_names(cartan.rank)
    table = QTable(cartan, {(a, k): MultiLaurent.parse(body, names) for a, k, body in entries})
    if table.k_max != k_max:
        raise DomainError("k_max header does not match entries")
    return table


def dump_quantum_table(table: QuantumQTable) -> str:
    lines = _header("quantum", table.cartan, table.k_max, table.torus.Theta)
    for (a, k) in sorted(table.entries, key=lambda ak: (ak[1], ak[0])):
        lines.append(f"entry {a + 1} {k} {table.entries[(a, k)].to_text()}")
    return "\n".join(lines) + "\n"


def load_quantum_table(text: str) -> QuantumQTable:
    cartan, k_max, theta, entries = _read_header(text, "quantum")
    torus = QuantumTorus(cartan)
    if [list(row) for row in torus.Theta] != theta:
        raise DomainError("commutation matrix in header does not match the Cartan data")
    table = QuantumQTable(torus, {(a, k): TorusElement.parse(torus, body) for a, k, body in entries})
    if table.k_max != k_max:
        raise DomainError("k_max header does not match entries")
    return table


def cached_quantum_table(cartan: CartanData, k_max: int, cache=None) -> QuantumQTable:
    """Quantum table to level k_max, keyed by (type, rank, k_max)."""
    cache = cache if cache is not None else NullCache()
    params = {"type": cartan.type, "rank": cartan.rank, "k_max": k_max}
    hit = cache.get("quantum-table", params)
    if hit is not None:
        try:
            return load_quantum_table(hit)
        except (DomainError, ValueError) as exc:
            warnings.warn(f"unreadable cached table ({exc}); recomputing", RuntimeWarning, stacklevel=2)
    table = solve_quantum(cartan, k_max)
    cache.put("quantum-table", params, dump_quantum_table(table))
    return table


def cached_qtable(cartan: CartanData, k_max: int, cache=None) -> QTable:
    cache = cache if cache is not None else NullCache()
    params = {"type": cartan.type, "rank": cartan.rank, "k_max": k_max}
    hit = cache.get("classical-table", params)
    if hit is not None:
        try:
            return load_qtable(hit)
        except (DomainError, ValueError) as exc:
            warnings.warn(f"unreadable cached table ({exc}); recomputing", RuntimeWarning, stacklevel=2)
    table = solve_symbolic(cartan, k_max)
    cache.put("classical-table", params, dump_qtable(table))
    return table
