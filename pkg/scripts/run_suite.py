"""Run the randomised property suites and print one line per property.

    python scripts/run_suite.py --seed 42 --cases 200
"""
import argparse
import json
import sys
import time

from ccs.config import RunConfig
from ccs.suite import PROPERTIES, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--cases", type=int, default=200)
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--max-states", type=int, default=2000)
    ap.add_argument("--only", nargs="*", help=f"prefixes of: {', '.join(PROPERTIES)}")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = RunConfig(max_states=args.max_states, seed=args.seed, cases=args.cases, depth=args.depth)
    t0 = time.perf_counter()
    result = run_suite(cfg, args.only)
    elapsed = time.perf_counter() - t0
    if args.json:
        print(json.dumps({**result.as_dict(), "seconds": round(elapsed, 2)}, sort_keys=True, indent=2))
    else:
        for r in result.properties:
            print(f"{'ok  ' if r.ok else 'FAIL'} {r.name:32} {r.passed:4}/{r.total:<4} skipped {r.skipped}")
            for f in r.failures:
                print(f"     {f}")
        print(f"{elapsed:.1f}s")
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
