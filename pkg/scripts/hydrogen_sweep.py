#!/usr/bin/env python3
"""Sweep the collapse duration and tabulate both model predictions.

For a grid of collapse-to-jitter ratios this writes one CSV row with the
instantaneous-model prediction (constant) and the objective-model
prediction (linear until it saturates), i.e. the data behind the
model-separation curve of the built-in qubit scenario:

    python scripts/hydrogen_sweep.py --a 0.7071 --b 0.7071 --out sweep.csv

The output is fully deterministic.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from weakprobe import HydrogenScenario, hydrogen_predictions


def parse_args(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--a", type=float, default=2**-0.5, help="preparation amplitude |a|")
    p.add_argument("--b", type=float, default=2**-0.5, help="postselection amplitude |b|")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--dtm", type=float, default=1.0, help="timing-jitter window")
    p.add_argument("--ratio-min", type=float, default=0.05, help="min dtc/dtm")
    p.add_argument("--ratio-max", type=float, default=2.0, help="max dtc/dtm")
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--out", help="CSV file (default: stdout)")
    return p.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    scenario = HydrogenScenario(args.a, args.b, args.hbar)
    ratios = np.linspace(args.ratio_min, args.ratio_max, args.points)
    rows = []
    for ratio in ratios:
        dtc = float(ratio) * args.dtm
        pred = hydrogen_predictions(scenario, dtc, args.dtm)
        rows.append(
            {
                "dtc_over_dtm": float(ratio),
                "delta_t_c": dtc,
                "prediction_vn": pred.vn.real,
                "prediction_objective": pred.objective.real,
                "gap": pred.vn.real - pred.objective.real,
            }
        )
    stream = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(stream, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            stream.close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
