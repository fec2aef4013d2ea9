#!/usr/bin/env python3
"""Regenerate data/solutions/<name>.sol with PyVRP's HGS solver.

Used once to produce the reference solutions shipped in data/solutions.
The resulting costs were checked against the best-known values in
vrplib's instance_data.csv. Needs `pip install pyvrp vrplib`.

    python3 tools/make_reference_solutions.py A-n45-k6 P-n60-k10 --seconds 240
"""
import argparse
from pathlib import Path

from pyvrp import read, solve
from pyvrp.stop import MaxRuntime

ROOT = Path(__file__).resolve().parent.parent / "data"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("names", nargs="+")
    ap.add_argument("--seconds", type=float, default=240)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    for name in args.names:
        # EUC_2D: nearest-integer distances
        inst = read(ROOT / "instances" / f"{name}.vrp", round_func="round")
        res = solve(inst, stop=MaxRuntime(args.seconds), seed=args.seed, display=False)
        print(name, res.cost(), "feasible" if res.is_feasible() else "INFEASIBLE")
        lines = [f"Route #{i}: {' '.join(map(str, r.visits()))}" for i, r in enumerate(res.best.routes(), 1)]
        lines.append(f"Cost {res.cost()}")
        (ROOT / "solutions" / f"{name}.sol").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
