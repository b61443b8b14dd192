#!/usr/bin/env python3
"""Optimal altitude and the outage it achieves, as a function of UAV density."""

import argparse
import csv
from pathlib import Path

from uavgrid.geometry import PRESETS
from uavgrid.optimize import HeightSearchSpec, optimize_height

PER_KM2 = 1e-6


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="urban", choices=sorted(PRESETS))
    ap.add_argument("--lambda-lo", type=float, default=5.0)
    ap.add_argument("--lambda-hi", type=float, default=50.0)
    ap.add_argument("--lambda-step", type=float, default=5.0)
    ap.add_argument("--h-lo", type=float, default=50.0)
    ap.add_argument("--h-hi", type=float, default=250.0)
    ap.add_argument("--r-max", type=float, default=250.0)
    ap.add_argument("--h-v", type=float, default=10.0)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/optimal_height.csv")
    args = ap.parse_args()

    spec = HeightSearchSpec(h_lo=args.h_lo, h_hi=args.h_hi)
    densities = []
    lam = args.lambda_lo
    while lam <= args.lambda_hi + 1e-9:
        densities.append(round(lam, 10))
        lam += args.lambda_step

    dest = Path(args.out)
    dest.parent.mkdir(parents=True, exist_ok=True)
    with dest.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["lambda_per_km2", "h_star_m", "outage_star"])
        for lam in densities:
            h_star, out_star = optimize_height(
                PRESETS[args.preset], args.r_max, args.h_v, lam * PER_KM2, spec,
                n_realizations=args.n, seed=args.seed, workers=args.workers)
            w.writerow([lam, h_star, repr(out_star)])
            print(f"lambda {lam:g}/km2 -> h* {h_star:g} m, outage {out_star:.4f}")
    print("wrote", dest)


if __name__ == "__main__":
    main()
