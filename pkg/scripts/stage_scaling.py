"""Stage counts of decremental triangle detection under the kill-active adversary.

Writes one CSV row per (n, seed) with the stage count and, per run, the worst
ratio between the value removed in a stage and |E(G_i)| / alpha_i.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from dynsep.decr_triangle import DecrementalTriangle, stage_progress
from dynsep.generators import gnp
from dynsep.graph import edge


def kill_active_run(n: int, p: float, seed: int, record: bool = True) -> DecrementalTriangle:
    """Delete a random edge of the reported triangle until none is left, then clear the rest."""
    g = gnp(n, p, seed)
    dt = DecrementalTriangle(g, seed=seed, record=record)
    rng = np.random.default_rng([seed, 7])
    while dt.active is not None:
        a, b, c = dt.active
        dt.delete(*[edge(a, b), edge(a, c), edge(b, c)][int(rng.integers(3))])
    return dt


def progress_ratios(dt: DecrementalTriangle) -> list[float]:
    """``removed value * alpha / |E(G_i)|`` for every finished stage; each must be at least 1."""
    out = []
    for rec in dt.stage_log:
        if rec.triangles_selected == 0:
            continue
        removed, m, alpha = stage_progress(rec)
        out.append(removed * alpha / m)
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="64,128,256,512")
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--csv", default="-")
    a = ap.parse_args()
    out = sys.stdout if a.csv == "-" else open(a.csv, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "seed", "stages", "min_progress_ratio"])
    for n in map(int, a.sizes.split(",")):
        for seed in range(a.seeds):
            dt = kill_active_run(n, a.p, seed)
            ratios = progress_ratios(dt)
            w.writerow([n, seed, dt.stage + 1, f"{min(ratios, default=float('inf')):.6g}"])
            out.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
