"""Run one verification suite and write its rows as JSON.

    python scripts/run_sweep.py constant-term --sweep medium --jobs 2 --out results/ct-medium.json
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from qfermion.verification import SUITES, run_suite


@dataclass
class SweepConfig:
    suite: str
    sweep: str = "small"
    jobs: int = 1
    out: str | None = None


def run(cfg: SweepConfig) -> dict:
    t0 = time.perf_counter()
    res = run_suite(cfg.suite, cfg.sweep, cfg.jobs)
    doc = {"config": asdict(cfg), "seconds": round(time.perf_counter() - t0, 3), **res.to_dict()}
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return doc


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("suite", choices=sorted(SUITES))
    ap.add_argument("--sweep", default="small")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out")
    cfg = SweepConfig(**vars(ap.parse_args()))
    doc = run(cfg)
    print(f"{cfg.suite} on {cfg.sweep}: {doc['count'] - doc['failures']}/{doc['count']} passed "
          f"in {doc['seconds']}s")
    for row in doc["rows"]:
        if not row["passed"]:
            print("  FAIL", json.dumps(row.get("item"), sort_keys=True))


if __name__ == "__main__":
    main()
