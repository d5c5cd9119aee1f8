#!/usr/bin/env python3
"""Benchmark the far-field tree summation against the direct double loop.

For a sequence of depths this times both evaluators on the same atom cloud,
reports the max per-component relative error, and optionally writes the
timing curve as SVG.  Depths where brute force would exceed --brute-cap
atoms skip the direct evaluation (the tree timing is still measured).

    python3 scripts/treecode_benchmark.py --depths 8 10 12 14 --theta-open 0.3
"""

import argparse
import sys
import time

import numpy as np

from cantor_riesz import (
    CantorParams,
    KernelSpec,
    TreeCodeConfig,
    atomize,
    eval_brute,
    eval_treecode,
)
from cantor_riesz.svgplot import line_plot


def bench_one(depth, args):
    params = CantorParams(d=args.d, s=args.s, lam=(args.lam,) * depth)
    atoms = atomize(params, args.refine_k)
    spec = KernelSpec(s=args.s)
    config = TreeCodeConfig(theta_open=args.theta_open)

    t0 = time.perf_counter()
    tree = eval_treecode(atoms, atoms.points, spec, config, self_exclude=True)
    t_tree = time.perf_counter() - t0

    row = dict(depth=depth, atoms=atoms.n, t_tree=t_tree,
               t_brute=None, speedup=None, rel_err=None)
    if atoms.n <= args.brute_cap:
        t0 = time.perf_counter()
        brute = eval_brute(atoms, atoms.points, spec, self_exclude=True)
        row["t_brute"] = time.perf_counter() - t0
        row["speedup"] = row["t_brute"] / t_tree
        denom = np.maximum(np.abs(brute.values), 1e-300)
        row["rel_err"] = float(np.max(np.abs(tree.values - brute.values) / denom))
    return row


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--depths", type=int, nargs="+", default=[8, 10, 12, 14])
    parser.add_argument("--d", type=int, default=1)
    parser.add_argument("--s", type=float, default=0.5)
    parser.add_argument("--lam", type=float, default=0.25)
    parser.add_argument("--refine-k", type=int, default=4, dest="refine_k")
    parser.add_argument("--theta-open", type=float, default=0.3, dest="theta_open")
    parser.add_argument("--brute-cap", type=int, default=70_000, dest="brute_cap",
                        help="skip the direct sum above this many atoms")
    parser.add_argument("--svg", help="write the timing curve here")
    args = parser.parse_args(argv)

    rows = [bench_one(depth, args) for depth in args.depths]

    print(f"{'N':>3} {'atoms':>8} {'tree [s]':>10} {'brute [s]':>10}"
          f" {'speedup':>8} {'max rel err':>12}")
    for r in rows:
        brute = f"{r['t_brute']:.3f}" if r["t_brute"] is not None else "-"
        speed = f"{r['speedup']:.1f}x" if r["speedup"] is not None else "-"
        err = f"{r['rel_err']:.2e}" if r["rel_err"] is not None else "-"
        print(f"{r['depth']:>3} {r['atoms']:>8} {r['t_tree']:>10.3f}"
              f" {brute:>10} {speed:>8} {err:>12}")

    if args.svg:
        series = [("tree", [r["atoms"] for r in rows],
                   [r["t_tree"] for r in rows])]
        with_brute = [r for r in rows if r["t_brute"] is not None]
        if with_brute:
            series.append(("brute", [r["atoms"] for r in with_brute],
                           [r["t_brute"] for r in with_brute]))
        svg = line_plot(series, "evaluation time vs atom count",
                        "atoms", "seconds", logy=True)
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg)
        print(f"wrote {args.svg}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
