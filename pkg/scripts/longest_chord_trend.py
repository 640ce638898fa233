"""KS distance between longest chords of uniform noncrossing trees and the limit law, across n.

The limit density blows up like (1 - 2x)^(-1/2) at x = 1/2 while chord lengths
live on the lattice {k/n}; the column ``lattice_floor`` is the smallest distance
any law on that lattice can reach, which decays like n^(-1/2).
Writes one CSV row per size.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass

import numpy as np

from nclam.stats import chord_length_law, ks_distance
from nclam.verify import lattice_ks_floor, longest_chord_samples


@dataclass
class TrendConfig:
    sizes: tuple = (100, 300, 1000, 3000)
    reps: int = 5000
    seed: int = 9
    workers: int = 1


def run(cfg: TrendConfig, out=sys.stdout) -> list[dict]:
    law = chord_length_law()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "reps", "ks", "lattice_floor", "mean", "limit_mean", "seconds"])
    grid = np.linspace(1 / 3, 0.5, 20001)
    limit_mean = float(0.5 - np.trapezoid(law.cdf(grid), grid))
    rows = []
    for n in cfg.sizes:
        t0 = time.perf_counter()
        xs = longest_chord_samples(n, cfg.reps, cfg.seed, cfg.workers)
        row = {
            "n": n,
            "reps": cfg.reps,
            "ks": ks_distance(xs, law),
            "lattice_floor": lattice_ks_floor(n),
            "mean": float(xs.mean()),
            "limit_mean": limit_mean,
            "seconds": time.perf_counter() - t0,
        }
        w.writerow([row[k] if isinstance(row[k], int) else f"{row[k]:.6f}" for k in row])
        out.flush()
        rows.append(row)
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,300,1000,3000")
    ap.add_argument("--reps", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=9)
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args(argv)
    cfg = TrendConfig(tuple(int(x) for x in a.sizes.split(",")), a.reps, a.seed, a.workers)
    run(cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
