"""Decay constants from slope fits: radial products for centered shapes, Gram determinants otherwise.

    python3 scripts/decay_fits.py [--naive]
"""
import argparse

import numpy as np

from holeprob.gram import decay_fit_gram
from holeprob.potential import decay_constant
from holeprob.radial import EnsembleSpec, fit_decay_slope, hole_prob_annulus, hole_prob_disk
from holeprob.regions import Region


def radial_slope(alpha, r, inner_ratio=None, corrected=True):
    spec = EnsembleSpec(alpha)
    if inner_ratio is None:
        logs = [hole_prob_disk(spec, x).log_prob for x in r]
    else:
        logs = [hole_prob_annulus(spec, inner_ratio * x, x).log_prob for x in r]
    return fit_decay_slope(r, logs, alpha, corrected=corrected)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--naive", action="store_true", help="plain least squares on r^(2 alpha)")
    args = ap.parse_args()
    corrected = not args.naive

    rows = []
    for alpha, r in ((1.0, np.arange(10.0, 30.001, 1.0)), (2.0, np.arange(4.0, 8.001, 0.25)),
                     (4.0, np.arange(2.0, 4.001, 0.1))):
        rows.append((f"disk(1) alpha={alpha:g}", radial_slope(alpha, r, corrected=corrected),
                     decay_constant(Region.disk(1.0), alpha)))
    r = np.arange(4.0, 8.001, 0.25)
    rows.append(("annulus(0.5,1) alpha=2", radial_slope(2.0, r, 0.5, corrected),
                 decay_constant(Region.annulus(0.5, 1.0), 2.0)))
    r = np.arange(3.0, 6.001, 0.5)
    rows.append(("halfdisk(1) alpha=2 [gram]", decay_fit_gram(Region.halfdisk(1.0), 2.0, r, corrected),
                 decay_constant(Region.halfdisk(1.0), 2.0)))

    print(f"{'shape':30s} {'fitted':>10s} {'exact':>10s} {'rel.err':>8s}")
    for name, fit, exact in rows:
        print(f"{name:30s} {fit:10.5f} {exact:10.5f} {fit / exact - 1:8.2%}")


if __name__ == "__main__":
    main()
