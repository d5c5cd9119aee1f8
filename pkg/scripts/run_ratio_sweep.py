#!/usr/bin/env python3
"""Run the full experiment sweep and print a compact console summary.

Thin wrapper over the library sweep runner: every artifact (CSV/JSON/SVG)
lands in the configured output directory, and the headline ratio table is
echoed to stdout so a quick look doesn't require opening files.

Usage:
    python3 scripts/run_ratio_sweep.py --config scripts/configs/sweep_demo.json
    python3 scripts/run_ratio_sweep.py --depths 4 8 12 --lam 0.25 --out out/quarter
"""

import argparse
import logging
import sys

from cantor_riesz.config import ExperimentConfig, LambdaSpec
from cantor_riesz.experiments import run_sweep


def build_config(args) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.load(args.config)
    else:
        cfg = ExperimentConfig()
    changes = {}
    if args.depths:
        changes["depths"] = tuple(args.depths)
    if args.lam is not None:
        changes["lam"] = LambdaSpec.constant(args.lam)
    if args.refine_k is not None:
        changes["refine_k"] = args.refine_k
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.out is not None:
        changes["out_dir"] = args.out
    if changes:
        import dataclasses

        cfg = dataclasses.replace(cfg, **changes)
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--depths", type=int, nargs="+", help="depth sweep")
    parser.add_argument("--lam", type=float, help="constant contraction ratio")
    parser.add_argument("--refine-k", type=int, dest="refine_k")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")

    cfg = build_config(args)
    result = run_sweep(cfg, workers=args.workers)

    print(f"\n{'case':8} {'N':>3} {'atoms':>7} {'ratio':>12} {'band':>8}  family")
    for rec in result["ratio"]["cases"]:
        if rec.get("skipped"):
            print(f"{rec['case_id']:8} {rec['N']:>3} {'-':>7} {'skipped':>12}"
                  f" {'-':>8}  {rec['lambda_desc']}")
            continue
        ratio = rec["ratio"]
        band = max(ratio, 1.0 / ratio)
        print(f"{rec['case_id']:8} {rec['N']:>3} {rec['n_atoms']:>7}"
              f" {ratio:12.6f} {band:8.2f}  {rec['lambda_desc']}")

    flag = result["manifest"]["all_hard_pass"]
    print(f"\nhard inequality checks: {'all pass' if flag else 'FAILURES'}")
    print(f"artifacts: {len(result['written'])} files in {cfg.out_dir}")
    return 0 if flag else 1


if __name__ == "__main__":
    sys.exit(main())
