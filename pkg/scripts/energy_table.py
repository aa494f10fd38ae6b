"""Table of R_U' = R_U - R_empty for the alpha = 2 shapes: closed form against balayage quadrature."""
from holeprob.potential import (
    balayage_moment_residual,
    UnsupportedRegionError,
    candidate_for,
    equilibrium,
    power_field,
    r_hole_closed_form,
    r_hole_from_balayage,
)
from holeprob.regions import Region

SHAPES = [
    Region.disk(0.5),
    Region.annulus(0.5, 0.8),
    Region.ellipse(0.5, 0.3),
    Region.cardioid(0.1, 0.5),
    Region.triangle(0.5),
    Region.halfdisk(0.8),
]


def main():
    f = power_field(2.0)
    meas = equilibrium(f)
    print(f"R_empty = {meas.r_empty:.12f}")
    print(f"{'shape':52s} {'closed':>14s} {'balayage':>14s} {'residual':>9s}")
    for region in SHAPES:
        closed = r_hole_closed_form(region, 2.0)
        try:
            cand = candidate_for(region, f)
        except UnsupportedRegionError:
            print(f"{region.describe():52s} {closed:14.10f} {'-':>14s} {'-':>9s}")
            continue
        bal = r_hole_from_balayage(region, f, cand, meas) - meas.r_empty
        res = balayage_moment_residual(region, cand, f, 8, meas)
        print(f"{region.describe():52s} {closed:14.10f} {bal:14.10f} {res:9.1e}")


if __name__ == "__main__":
    main()
