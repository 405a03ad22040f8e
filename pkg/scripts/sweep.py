"""Run the full certification for r = 1..R and print a timing table.

    python3 scripts/sweep.py --max-r 6 --json sweep.json
"""
import argparse
import json
import time

from absorption.cli import certify


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-r", type=int, default=6)
    ap.add_argument("--serre-pairs", type=int, default=100)
    ap.add_argument("--json", help="write all reports to this file")
    args = ap.parse_args()

    reports, total = [], 0.0
    print(f"{'r':>2} {'p':>5} {'D':>3} {'pass':>5} {'fail':>5} {'skip':>5} {'seconds':>8}  slowest check")
    for r in range(1, args.max_r + 1):
        t0 = time.perf_counter()
        rep = certify(r=r, serre_pairs=args.serre_pairs)
        dt = time.perf_counter() - t0
        total += dt
        counts = {s: sum(c.status == s for c in rep.checks) for s in ("pass", "fail", "skipped")}
        slow = max(rep.checks, key=lambda c: c.ms)
        print(f"{r:>2} {rep.params['p']:>5} {rep.params['depth']:>3} {counts['pass']:>5} "
              f"{counts['fail']:>5} {counts['skipped']:>5} {dt:>8.2f}  {slow.id} ({slow.ms / 1000:.2f}s)")
        for c in rep.failed:
            print(f"   FAIL {c.id}: expected {c.expected!r}, got {c.got!r}")
        reports.append(rep.to_dict())
    print(f"total {total:.2f}s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2)


if __name__ == "__main__":
    main()
