"""Versioned instance sweeps shipped as package data.

A sweep is a list of blocks; each block names a Cartan type and rank, a
bound on the total number of boxes of nu, a bound on the number of parts
of each component, and an optional bound on max_a l_a.  Every admissible
lambda inside the bound is included.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .cartan import cartan
from .errors import ConfigurationError
from .fermionic import FermionicInstance, admissible_weights
from .genfunc import bounded_multipartitions

__all__ = ["SweepBlock", "load_sweeps", "sweep_names", "sweep_instances", "block_instances"]


@dataclass(frozen=True)
class SweepBlock:
    type: str
    rank: int
    max_boxes: int
    max_rows: int
    max_ell: int | None = None


def load_sweeps() -> dict:
    text = resources.files("qfermion").joinpath("data/sweeps.json").read_text(encoding="utf-8")
    return json.loads(text)


def sweep_names() -> list[str]:
    return sorted(load_sweeps()["sweeps"])


def block_instances(block: SweepBlock) -> list[FermionicInstance]:
    c = cartan(block.type, block.rank)
    out = []
    for nu in bounded_multipartitions(block.rank, block.max_boxes, block.max_rows):
        for lam in admissible_weights(c, nu):
            if block.max_ell is None or max(lam.coords) <= block.max_ell:
                out.append(FermionicInstance(c, nu, lam))
    return out


def sweep_instances(name: str) -> list[FermionicInstance]:
    data = load_sweeps()["sweeps"]
    if name not in data:
        raise ConfigurationError(f"unknown sweep {name!r}; known: {sorted(data)}")
    out = []
    for spec in data[name]:
        out.extend(block_instances(SweepBlock(**spec)))
    return out
