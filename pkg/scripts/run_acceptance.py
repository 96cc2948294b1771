"""Run the acceptance criteria and write a JSON report.

Prints one PASS/FAIL line per criterion.  Exit status is pytest's.
"""

import argparse
import json
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "results" / "acceptance.json"))
    ap.add_argument("-k", dest="select", help="pytest -k expression")
    args = ap.parse_args()
    argv = [str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider"]
    if args.select:
        argv += ["-k", args.select]
    code = pytest.main(argv)
    mod = sys.modules.get("test_acceptance")
    if mod is not None:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps({"exit": int(code), "clauses": mod.REPORT,
                                   "summary": mod.summary_lines()}, indent=2) + "\n")
        print(f"report written to {out}")
    return int(code)


if __name__ == "__main__":
    sys.exit(main())
