"""Run the full default verification grid and write the JSON report.

    python scripts/run_default_grid.py [--jobs N] [--out report.json]
"""
import argparse
import json
import time

from buchi.verify import GridSpec, verify_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="default_grid_report.json")
    args = ap.parse_args()

    t0 = time.perf_counter()
    report = verify_all(GridSpec(jobs=args.jobs))
    with open(args.out, "w") as fh:
        json.dump(report.to_dict(), fh, indent=1)
    print(report.summary())
    print(f"\nwall time {time.perf_counter() - t0:.1f}s, report in {args.out}")


if __name__ == "__main__":
    main()
