#!/usr/bin/env python3
"""Connectivity CDF sweeps: every preset at three serving ranges."""

import argparse
from pathlib import Path

from uavgrid.cli import main as cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--lambda-uav", type=float, default=20.0, help="UAV density per km2")
    ap.add_argument("--h-uav", type=float, default=100.0)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for preset in ("suburban", "urban", "dense-urban"):
        for r_max in (200, 250, 300):
            dest = out / f"distribution_{preset}_r{r_max}.csv"
            rc = cli([
                "distribution", "--preset", preset,
                "--lambda-uav", str(args.lambda_uav), "--h-uav", str(args.h_uav),
                "--r-max", str(r_max),
                "--n-realizations", str(args.n), "--seed", str(args.seed),
                "--output", str(dest),
            ])
            if rc != 0:
                raise SystemExit(rc)
            print("wrote", dest)


if __name__ == "__main__":
    main()
