"""Normalized variances of X_L(rD) and of the statistics phi_p as r approaches 1."""
import argparse

from holeprob.fluctuations import lower_bound, upper_bound, variance_count, variance_linear


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    ap.add_argument("--r", type=float, nargs="+", default=[0.9, 0.95, 0.99])
    ap.add_argument("--p", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    args = ap.parse_args()

    for L in args.L:
        print(f"L = {L:g}: bounds [{lower_bound(L):.3e}, {upper_bound(L):g}]")
        print(f"  {'r':>6s} {'(1-r)V':>10s}" + "".join(f" {'p=' + format(p, 'g'):>10s}" for p in args.p))
        for r in args.r:
            line = f"  {r:6.3f} {variance_count(L, r).normalized:10.5f}"
            line += "".join(f" {variance_linear(L, r, p).normalized:10.5f}" for p in args.p)
            print(line)


if __name__ == "__main__":
    main()
