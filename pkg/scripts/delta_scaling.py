"""Amortized cost of the pivot clique against an adversary that keeps killing its output.

On random Delta-regular graphs the adversary deletes a random edge of the
reported clique until the pivot is isolated.  The elementary-operation count
(pivot bookkeeping plus MIS engine) divided by the number of deletions should
grow linearly in Delta.
"""

from __future__ import annotations

import argparse
import csv
import sys

from dynsep.harness import InstanceSpec, RunConfig, run_single


def amortized_cost(n: int, d: int, seed: int) -> tuple[int, int, float]:
    cfg = RunConfig("clique-pivot", InstanceSpec("regular", n=n, d=d), trace="kill-output-vertex",
                    seed=seed, verify="off")
    rep = run_single(cfg, seed)
    work = rep.rows[-1]["work"]
    return rep.updates, work, work / max(rep.updates, 1)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1024)
    ap.add_argument("--degrees", default="8,16,32,64")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--csv", default="-")
    a = ap.parse_args()
    out = sys.stdout if a.csv == "-" else open(a.csv, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "delta", "seed", "deletions", "work", "amortized"])
    for d in map(int, a.degrees.split(",")):
        for seed in range(a.seeds):
            dels, work, amort = amortized_cost(a.n, d, seed)
            w.writerow([a.n, d, seed, dels, work, f"{amort:.4f}"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
