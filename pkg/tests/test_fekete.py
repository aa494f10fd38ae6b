import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holeprob.fekete import (
    InfeasibleRegionError,
    delta_n,
    objective,
    optimize_fekete,
    project_outside,
    separation,
)
from holeprob.potential import power_field, solve_T
from holeprob.regions import Region

Q2 = power_field(2.0)


def test_two_points_match_radial_scan():
    res = optimize_fekete(2, Q2, seed=0)
    # antipodal pair at radius rho: objective log(2 rho) - rho^2
    rho = np.linspace(0.01, 2.0, 2_000_001)
    best = rho[np.argmax(np.log(2 * rho) - rho ** 2)]
    radii = np.abs(res.points)
    assert np.allclose(radii, best, atol=1e-6)
    assert abs(res.points[0] + res.points[1]) < 1e-6
    assert res.energy == pytest.approx(-(math.log(2 * best) - best ** 2), abs=1e-10)


def test_delta_consistent_with_points():
    res = optimize_fekete(12, Q2, seed=4)
    assert delta_n(res.points, Q2) == pytest.approx(res.delta_n, rel=1e-12)
    assert res.energy == pytest.approx(-math.log(res.delta_n), rel=1e-12)
    assert res.min_separation == pytest.approx(separation(res.points), rel=1e-15)


def test_support_confinement():
    res = optimize_fekete(30, Q2, seed=1)
    assert np.max(np.abs(res.points)) <= solve_T(Q2) + 0.05


def test_points_stay_outside_hole():
    region = Region.disk(0.5)
    res = optimize_fekete(20, Q2, region, seed=0)
    assert np.min(np.abs(res.points)) >= 0.5 - 1e-12


def test_delta_n_nonincreasing_in_n():
    # delta_n decreases to exp(-R), i.e. -log delta_n increases toward 3/4
    energies = [optimize_fekete(n, Q2, seed=0, starts=2).energy for n in (5, 10, 20)]
    assert energies[0] <= energies[1] <= energies[2] < 0.75


def test_objective_gradient_by_finite_differences():
    from holeprob.fekete import _gradient

    rng = np.random.default_rng(3)
    z = rng.normal(size=6) + 1j * rng.normal(size=6)
    g = _gradient(z, Q2)
    h = 1e-6
    for i in range(6):
        for d in (1, 1j):
            zp, zm = z.copy(), z.copy()
            zp[i] += h * d
            zm[i] -= h * d
            fd = (objective(zp, Q2) - objective(zm, Q2)) / (2 * h)
            comp = g[i].real if d == 1 else g[i].imag
            assert fd == pytest.approx(comp, rel=1e-6, abs=1e-6)


def test_separation_examples():
    assert separation([0.3 + 0j, 0.3 + 0j]) == 0.0
    rho = 0.7
    tri = rho * np.exp(2j * math.pi * np.arange(3) / 3)
    assert separation(tri) == pytest.approx(math.sqrt(3) * rho, rel=1e-15)
    with pytest.raises(ValueError):
        separation([1.0])


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.45, 0.45), st.floats(-0.45, 0.45))
def test_projection_lands_on_boundary(x, y):
    for region in (Region.disk(0.5), Region.annulus(0.2, 0.5), Region.ellipse(0.5, 0.3)):
        z = np.array([complex(x, y)])
        p = project_outside(z, region)[0]
        if region.contains(z)[0]:
            assert not region.contains(np.array([p * (1 + 1e-6)]))[0] or region.kind == "annulus"
        else:
            assert p == z[0]


def test_infeasible_region():
    with pytest.raises(InfeasibleRegionError):
        optimize_fekete(5, Q2, Region.disk(2.0), seed=0)
    with pytest.raises(ValueError):
        optimize_fekete(1, Q2)


def test_deterministic():
    a = optimize_fekete(15, Q2, seed=9)
    b = optimize_fekete(15, Q2, seed=9)
    np.testing.assert_array_equal(a.points, b.points)
