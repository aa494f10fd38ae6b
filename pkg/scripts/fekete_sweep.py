"""Weighted Fekete energies against n, median over seeds.

    python3 scripts/fekete_sweep.py --n 10 20 40 60 --seeds 5 [--hole 0.5]
"""
import argparse

import numpy as np

from holeprob.fekete import optimize_fekete
from holeprob.potential import r_hole_closed_form
from holeprob.regions import Region


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[10, 20, 40, 60])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--hole", type=float, default=None, help="radius of a centered disk hole")
    args = ap.parse_args()

    region = None if args.hole is None else Region.disk(args.hole)
    target = 0.75 + (0.0 if region is None else r_hole_closed_form(region, 2.0))
    energies = []
    print(f"{'n':>4s} {'median':>10s} {'min':>10s} {'max':>10s} {'rel.gap':>8s}")
    for n in args.n:
        e = [optimize_fekete(n, region=region, seed=s, starts=1).energy for s in range(args.seeds)]
        med = float(np.median(e))
        energies.append(med)
        print(f"{n:4d} {med:10.6f} {min(e):10.6f} {max(e):10.6f} {med / target - 1:8.2%}")
    if len(args.n) >= 3:
        n = np.array(args.n, dtype=float)
        design = np.stack([np.ones_like(n), np.log(n) / n, 1 / n], axis=1)
        coef, *_ = np.linalg.lstsq(design, np.array(energies), rcond=None)
        print(f"extrapolated limit {coef[0]:.5f} (target {target:g})")


if __name__ == "__main__":
    main()
