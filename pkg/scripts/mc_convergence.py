#!/usr/bin/env python3
"""Monte Carlo convergence table for one scenario, model and seed.

Runs a single reproducible stream to the largest checkpoint and reports
the running estimate at log-spaced trial counts, together with the
analytic target and the z-score, so the 1/sqrt(N) shrink of the
standard error is visible on real data:

    python scripts/mc_convergence.py --model objective --dtc 0.5 --seed 3

Identical arguments always produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from weakprobe import (
    SimulationSpec,
    analytic_target,
    build_hydrogen,
    convergence_report,
)


def parse_args(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--a-re", type=float, default=2**-0.5)
    p.add_argument("--a-im", type=float, default=0.0)
    p.add_argument("--b-re", type=float, default=2**-0.5)
    p.add_argument("--b-im", type=float, default=0.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--dtm", type=float, default=1.0)
    p.add_argument("--dtc", type=float, default=1.0)
    p.add_argument("--model", choices=["vn", "objective"], default="objective")
    p.add_argument("--trials", type=int, default=1_000_000, help="largest checkpoint")
    p.add_argument("--per-decade", type=int, default=2, help="checkpoints per decade")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV file (default: stdout)")
    return p.parse_args(argv)


def checkpoints(n_max: int, per_decade: int) -> list[int]:
    grid = np.geomspace(100, n_max, max(2, int(np.log10(n_max / 100) * per_decade) + 1))
    out = sorted({int(round(c)) for c in grid} | {n_max})
    return [c for c in out if c <= n_max]


def main(argv=None) -> int:
    args = parse_args(argv)
    cfg = build_hydrogen(
        complex(args.a_re, args.a_im),
        complex(args.b_re, args.b_im),
        hbar=args.hbar,
        delta_t_m=args.dtm,
        delta_t_c=args.dtc,
    )
    spec = SimulationSpec(cfg, args.model, args.trials, args.seed)
    target = analytic_target(spec)
    rows = []
    for res in convergence_report(spec, checkpoints(args.trials, args.per_decade)):
        err = res.mean.real - target.real
        rows.append(
            {
                "model": args.model,
                "N": res.trials,
                "seed": res.seed,
                "mean_re": res.mean.real,
                "mean_im": res.mean.imag,
                "stderr_re": res.stderr,
                "stderr_im": res.stderr_im,
                "target_re": target.real,
                "z": err / res.stderr if res.stderr > 0 else 0.0,
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
