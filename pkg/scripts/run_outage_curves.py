#!/usr/bin/env python3
"""Outage vs altitude for several UAV densities in one city.

All densities share one sampling envelope, so curves are directly
comparable realization by realization.
"""

import argparse
import csv
import math
from pathlib import Path

from uavgrid.connectivity import outage_grid
from uavgrid.geometry import PRESETS, SamplingEnvelope
from uavgrid.optimize import grid_points

PER_KM2 = 1e-6


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="urban", choices=sorted(PRESETS))
    ap.add_argument("--densities", type=float, nargs="+", default=[10.0, 20.0, 30.0],
                    help="UAV densities per km2")
    ap.add_argument("--h-lo", type=float, default=60.0)
    ap.add_argument("--h-hi", type=float, default=240.0)
    ap.add_argument("--h-step", type=float, default=10.0)
    ap.add_argument("--r-max", type=float, default=250.0)
    ap.add_argument("--h-v", type=float, default=10.0)
    ap.add_argument("--gamma-th", type=float, default=0.8)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/outage_curves.csv")
    args = ap.parse_args()

    city = PRESETS[args.preset]
    heights = grid_points(args.h_lo, args.h_hi, args.h_step)
    lambdas = [v * PER_KM2 for v in args.densities]
    d_cap = math.sqrt(args.r_max ** 2 - (heights[0] - args.h_v) ** 2)
    envelope = SamplingEnvelope(lambda_cap=max(lambdas), d_cap=d_cap)
    grid = outage_grid(city, args.r_max, args.h_v, lambdas, heights, args.gamma_th,
                       args.n, args.seed, envelope=envelope)

    dest = Path(args.out)
    dest.parent.mkdir(parents=True, exist_ok=True)
    with dest.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["lambda_per_km2", "h_uav_m", "outage"])
        for i, lam in enumerate(args.densities):
            for j, h in enumerate(heights):
                w.writerow([lam, h, repr(float(grid[i, j]))])
    print("wrote", dest)
    for i, lam in enumerate(args.densities):
        j = int(grid[i].argmin())
        print(f"  lambda {lam:g}/km2: best h {heights[j]:g} m, outage {grid[i, j]:.4f}")


if __name__ == "__main__":
    main()
