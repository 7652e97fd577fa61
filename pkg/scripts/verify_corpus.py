"""Run every exact identity suite on the corpus under both test colorings
and print a per-graph tally. Failing checks are written to a CSV.

    python3 scripts/verify_corpus.py --k-max 3 --failures failures.csv
"""

import argparse
import time

from planar_ising import corpus
from planar_ising.verify import SUITES, VerifyConfig, checks_csv, run_suites


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-max", type=int, default=3)
    ap.add_argument("--suite", choices=SUITES, action="append", help="repeatable; default all")
    ap.add_argument("--failures", help="CSV path for failing checks")
    args = ap.parse_args()
    suites = tuple(args.suite) if args.suite else SUITES
    failed = []
    for name, g in corpus.standard_corpus().items():
        for gc in corpus.two_colorings(g):
            colors = "".join(c for _, c in gc.boundary)
            cfg = VerifyConfig(k_max=args.k_max, suites=suites)
            t0 = time.perf_counter()
            checks = run_suites(gc, cfg)
            bad = [c for c in checks if not c.ok]
            failed += bad
            print(f"{name:12s} {colors:9s} {len(checks) - len(bad):6d}/{len(checks):<6d} "
                  f"{time.perf_counter() - t0:6.1f}s")
            for note in cfg.skipped:
                print(f"    skipped {note}")
    if args.failures:
        with open(args.failures, "w", encoding="utf-8") as fh:
            fh.write(checks_csv(failed))
    print(f"{len(failed)} failing checks")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
