#!/usr/bin/env python3
"""Run the full acceptance battery and write the CSV artifacts.

Usage:
    python scripts/run_acceptance_suite.py [--out DIR] [--seed N]
"""

import argparse
import sys
import time

from onesided.suite import run_all


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="suite_out")
    ap.add_argument("--seed", type=int, default=20240901)
    args = ap.parse_args()
    t0 = time.time()
    results = run_all(args.out, seed=args.seed, echo=True)
    ok = all(r.passed for r in results)
    print(f"{'ALL PASS' if ok else 'FAILURES PRESENT'} "
          f"({time.time() - t0:.0f}s, artifacts in {args.out}/)")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
