#!/usr/bin/env python3
"""Outage contour over (density, altitude) plus the cheapest deployment
meeting a target outage."""

import argparse
from pathlib import Path

from uavgrid.cli import main as cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="urban")
    ap.add_argument("--target-outage", type=float, default=0.1)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/contour.csv")
    args = ap.parse_args()

    dest = Path(args.out)
    dest.parent.mkdir(parents=True, exist_ok=True)
    rc = cli([
        "contour", "--preset", args.preset,
        "--lambda-lo", "5", "--lambda-hi", "50", "--lambda-step", "1",
        "--h-lo", "50", "--h-hi", "250", "--h-step", "5",
        "--target-outage", str(args.target_outage),
        "--n-realizations", str(args.n), "--seed", str(args.seed),
        "--output", str(dest),
    ])
    if rc != 0:
        raise SystemExit(rc)
    print("wrote", dest)


if __name__ == "__main__":
    main()
