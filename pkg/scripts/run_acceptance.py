"""Run acceptance checks A1-A10 and print one pass/fail line each.

    python scripts/run_acceptance.py --workers 4 --out acceptance.json
    python scripts/run_acceptance.py --only A3 A9
"""

import argparse
import json
import sys
import time

from scatterlab.acceptance import CHECKS, determinism, report_bytes


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--parallel-workers", type=int, default=4,
                    help="worker count for the determinism rerun")
    ap.add_argument("--only", nargs="*", default=None, help="subset such as A1 A3")
    ap.add_argument("--out", default=None, help="write the JSON reports here")
    args = ap.parse_args(argv)

    names = args.only or list(CHECKS) + ["A10"]
    reports = {}
    for name in names:
        if name not in CHECKS:
            continue
        start = time.perf_counter()
        reports[name] = CHECKS[name](workers=args.workers)
        status = "PASS" if reports[name]["passed"] else "FAIL"
        print(f"{name} {status} ({time.perf_counter() - start:.1f}s)", flush=True)
    if "A10" in names and reports:
        rep = determinism(reports, args.parallel_workers)
        reports["A10"] = rep
        print(f"A10 {'PASS' if rep['passed'] else 'FAIL'}", flush=True)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(report_bytes(reports))
    return 0 if all(r["passed"] for r in reports.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
