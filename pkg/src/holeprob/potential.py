"""Weighted logarithmic potential theory for radial external fields g(|z|)/2.

Equilibrium measure on the plane, minimum energies R_empty and R_U, balayage
candidates for the shapes where the sweep is known in closed form, moment
identities, and the closed-form constants for the six canonical shapes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
from scipy.optimize import brentq

from .quadrature import gauss_kronrod, gl_panels, gauss_legendre
from .regions import Region

__all__ = [
    "RadialField",
    "EquilibriumMeasure",
    "BalayageCandidate",
    "BracketError",
    "UnsupportedRegionError",
    "MassMismatchError",
    "power_field",
    "solve_T",
    "equilibrium",
    "r_empty",
    "r_empty_power",
    "angular_log_average",
    "log_potential",
    "mu2_integral",
    "nu2_integral",
    "disk_candidate",
    "annulus_candidate",
    "ellipse_candidate",
    "cardioid_candidate",
    "candidate_for",
    "r_hole_closed_form",
    "r_hole_from_balayage",
    "balayage_moment_residual",
    "triangle_moment_targets",
    "triangle_constraint_check",
    "triangle_energy_from_moment",
    "halfdisk_series_density",
    "halfdisk_series_constant",
    "decay_constant",
    "annulus_decay_constant",
    "r_hole_beta",
    "check_admissible",
]


class BracketError(ValueError):
    """No sign change of r g'(r) - level on the search bracket."""


class UnsupportedRegionError(ValueError):
    """Region / exponent combination without a closed form or balayage candidate."""


class MassMismatchError(ValueError):
    """Balayage candidate mass differs from mu_2(U)."""


@dataclass(frozen=True)
class RadialField:
    """External field g with first and second derivatives."""

    g: Callable
    g1: Callable
    g2: Callable
    label: str = "custom"

    def scaled(self, c: float) -> "RadialField":
        g, g1, g2 = self.g, self.g1, self.g2
        return RadialField(lambda r: c * g(r), lambda r: c * g1(r), lambda r: c * g2(r),
                           f"{c:g}*{self.label}")

    def check(self, probes=(1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0)) -> None:
        """Raise ValueError when the sentinel checks of the field conditions fail."""
        r = np.asarray(probes, dtype=float)
        if np.any(np.diff(self.g(r)) < 0):
            raise ValueError("g must be nondecreasing")
        rg1 = r * self.g1(r)
        if np.any(np.diff(rg1) < -1e-12):
            raise ValueError("r g'(r) must be nondecreasing")
        if abs(1e-12 * self.g1(1e-12)) > 1e-3:
            raise ValueError("r g'(r) must vanish at 0+")
        big = 1e3
        if big * math.exp(-self.g(big) / 2) > 1e-3:
            raise ValueError("r exp(-g(r)/2) must vanish at infinity")


def power_field(alpha: float, scale: float = 1.0) -> RadialField:
    """g(r) = scale * r^alpha."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    a, c = float(alpha), float(scale)
    return RadialField(
        lambda r: c * np.power(r, a),
        lambda r: c * a * np.power(r, a - 1),
        lambda r: c * a * (a - 1) * np.power(r, a - 2),
        f"{c:g}*r^{a:g}",
    )


def solve_T(f: RadialField, level: float = 2.0, bracket=(1e-9, 1e6)) -> float:
    """Radius T with T g'(T) = level (level = beta for the beta-ensembles)."""
    h = lambda r: float(r * f.g1(r)) - level
    lo, hi = bracket
    if not h(lo) < 0 < h(hi):
        raise BracketError(f"r g'(r) does not cross {level} on [{lo}, {hi}]")
    return brentq(h, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def r_empty_power(alpha: float) -> float:
    """Closed-form minimum energy for g = r^alpha."""
    return 0.75 * (2 / alpha) - math.log(2 / alpha) / alpha


@dataclass
class EquilibriumMeasure:
    """Equilibrium measure of the plane: density (g'' + g'/r) / 4pi on |z| <= T."""

    field: RadialField
    T: float
    r_empty: float

    def radial_density(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = (self.field.g2(r) + self.field.g1(r) / r) / (4 * math.pi)
        return np.where((r > 0) & (r <= self.T), dens, 0.0)

    def ring_density(self, r):
        """Mass per unit radius: 2 pi r times the areal density = (r g'' + g') / 2."""
        r = np.asarray(r, dtype=float)
        return np.where(r <= self.T, 0.5 * (r * self.field.g2(r) + self.field.g1(r)), 0.0)

    def mass(self) -> float:
        return float(gauss_kronrod(self.ring_density, 0.0, self.T, abs_tol=1e-13, rel_tol=1e-13))


def r_empty(f: RadialField, T: Optional[float] = None) -> float:
    """log(1/T) + g(T) - (1/4) int_0^T r g'(r)^2 dr."""
    T = solve_T(f) if T is None else T
    integral = gauss_kronrod(lambda r: r * f.g1(r) ** 2, 0.0, T, abs_tol=1e-13, rel_tol=1e-13)
    return math.log(1 / T) + float(f.g(T)) - 0.25 * float(integral)


def equilibrium(f: RadialField) -> EquilibriumMeasure:
    T = solve_T(f)
    return EquilibriumMeasure(f, T, r_empty(f, T))


# -- logarithmic potential -------------------------------------------------

def _graded_edges(center, lo, hi, h0=1e-12, ratio=2.0):
    """Panel edges on [lo, hi] refining geometrically toward ``center``."""
    pts = [lo, hi]
    for side in (-1, 1):
        step = h0
        while True:
            p = center + side * step
            if not lo < p < hi:
                break
            pts.append(p)
            step *= ratio
    if lo < center < hi:
        pts.append(center)
    return np.unique(np.asarray(pts))


def angular_log_average(z: complex, rho, n=12):
    """(1/2pi) int_0^{2pi} log(1/|z - rho e^{it}|) dt by graded Gauss-Legendre.

    The mesh is refined geometrically toward the nearest point t = arg z,
    where the integrand has its log singularity when rho = |z|.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    # integrate over t - phi in [-pi, pi]; symmetric, so use [0, pi] twice
    t, w = gl_panels(_graded_edges(0.0, 0.0, math.pi), n)
    pts = abs(z) - rho[:, None] * np.exp(1j * t[None, :])
    with np.errstate(divide="ignore"):
        vals = -np.log(np.abs(pts))
    vals = np.where(np.isfinite(vals), vals, 0.0)
    out = (vals @ w) / math.pi
    return out if out.size > 1 else float(out[0])


def log_potential(measure: EquilibriumMeasure, z: complex) -> float:
    """p_mu(z) = int log(1/|z - w|) dmu(w) by radial Gauss-Kronrod over rings."""
    r = abs(z)
    points = (r,) if 0 < r < measure.T else ()
    f = lambda rho: measure.ring_density(rho) * angular_log_average(z, rho)
    return float(gauss_kronrod(f, 0.0, measure.T, abs_tol=1e-10, rel_tol=1e-10, points=points))


# -- measures on regions ---------------------------------------------------

def mu2_integral(region: Region, measure: EquilibriumMeasure, f: Callable, n_theta=64, n_rho=64):
    """int_U f(w) dmu(w) for mu restricted to U.

    Centered disks and annuli reduce to one radial Gauss-Kronrod integral when
    f depends on |w| only (``f.radial`` attribute set); otherwise a polar
    tensor rule is used, graded toward the origin for alpha < 2 densities.
    """
    radial = getattr(f, "radial", None)
    if radial is not None and region.kind in ("disk", "annulus") and region.center == 0:
        lo = 0.0 if region.kind == "disk" else region.a
        hi = region.a if region.kind == "disk" else region.b
        return gauss_kronrod(lambda r: radial(r) * measure.ring_density(r), lo, hi,
                             abs_tol=1e-14, rel_tol=1e-13)
    z, w = region.area_quadrature(n_theta, n_rho, grade=2.0)
    dens = measure.radial_density(np.abs(z))
    vals = np.asarray(f(z))
    return np.tensordot(w * dens, vals, axes=(0, 0))


def _radial(fn):
    """Mark f(w) = h(|w|) so area integrals over centered disks can go radial."""
    def f(w):
        return fn(np.abs(w))
    f.radial = fn
    return f


@dataclass
class BalayageCandidate:
    """Boundary measure given as mass per unit boundary parameter on each part."""

    densities: Dict[str, Callable]
    label: str = ""
    nodes_per_panel: int = 32
    panels: int = 16

    def integrate(self, region: Region, f: Callable):
        total = 0.0
        for part in region.boundary_parts():
            dens = self.densities.get(part.name)
            if dens is None:
                raise ValueError(f"candidate has no density on boundary part {part.name!r}")
            t, w = part.nodes(self.nodes_per_panel, self.panels)
            vals = np.asarray(f(part.w(t)))
            total = total + np.tensordot(w * dens(t), vals, axes=(0, 0))
        return total

    def total_mass(self, region: Region) -> float:
        return float(np.real(self.integrate(region, lambda w: np.ones(np.shape(w)))))

    def min_density(self, region: Region) -> float:
        lows = []
        for part in region.boundary_parts():
            t = np.linspace(part.t0, part.t1, 1001)
            lows.append(float(np.min(self.densities[part.name](t))))
        return min(lows)


nu2_integral = lambda region, candidate, f: candidate.integrate(region, f)


def disk_candidate(region: Region, f: RadialField) -> BalayageCandidate:
    """Sweep of mu|U for a disk: uniform on the circle.

    Centered disk: a g'(a) / 4pi per radian (any radial field). A translated
    disk is only handled for the quadratic field, where mu is uniform and the
    sweep is a^2 / 2pi per radian regardless of the center.
    """
    a = region.a
    if region.center == 0:
        c = a * float(f.g1(a)) / (4 * math.pi)
    else:
        c = a * a / (2 * math.pi)
    return BalayageCandidate({"circle": lambda t: np.full(np.shape(t), c)}, "disk")


def annulus_candidate(region: Region, f: RadialField) -> BalayageCandidate:
    """lambda-split uniform masses on the two circles of a centered annulus."""
    a, b = region.a, region.b
    ga, gb = float(f.g(a)), float(f.g(b))
    ag, bg = a * float(f.g1(a)), b * float(f.g1(b))
    lb = math.log(b / a)
    lam = ((gb - ga) - ag * lb) / ((bg - ag) * lb)
    c = (bg - ag) / (4 * math.pi)
    return BalayageCandidate({
        "inner": lambda t: np.full(np.shape(t), lam * c),
        "outer": lambda t: np.full(np.shape(t), (1 - lam) * c),
    }, f"annulus lambda={lam:.6g}")


def ellipse_candidate(region: Region) -> BalayageCandidate:
    """(ab / 2pi)(1 - (a^2-b^2)/(a^2+b^2) cos 2t) per unit eccentric angle (quadratic field)."""
    a, b = region.a, region.b
    e = (a * a - b * b) / (a * a + b * b)
    return BalayageCandidate(
        {"ellipse": lambda t: a * b / (2 * math.pi) * (1 - e * np.cos(2 * t))}, "ellipse")


def cardioid_candidate(region: Region) -> BalayageCandidate:
    """(b^2 / 2pi)(1 + 2a^2 + 2a cos t) per radian (quadratic field)."""
    a, b = region.a, region.b
    return BalayageCandidate(
        {"cardioid": lambda t: b * b / (2 * math.pi) * (1 + 2 * a * a + 2 * a * np.cos(t))},
        "cardioid")


def candidate_for(region: Region, f: RadialField, alpha2: bool = True) -> BalayageCandidate:
    """Known balayage of mu|U, raising UnsupportedRegionError when none is known."""
    if region.kind == "disk":
        if region.center != 0 and not alpha2:
            raise UnsupportedRegionError("translated disks need the quadratic field")
        return disk_candidate(region, f)
    if region.kind == "annulus":
        return annulus_candidate(region, f)
    if region.kind in ("ellipse", "cardioid"):
        if not alpha2:
            raise UnsupportedRegionError(f"{region.kind} balayage is only known for g = r^2")
        return ellipse_candidate(region) if region.kind == "ellipse" else cardioid_candidate(region)
    raise UnsupportedRegionError(f"no balayage candidate for {region.kind}")


# -- constants ------------------------------------------------------------

def check_admissible(region: Region, T: float) -> None:
    """Region closure must lie in D(0, T) (or touch |z| = T when flagged)."""
    rmax = region.outer_radius()
    ok = rmax <= T * (1 + 1e-12) if region.boundary_contact else rmax < T
    if not ok:
        raise UnsupportedRegionError(
            f"{region.describe()} is not contained in the support disk D(0, {T:.6g})")


def r_hole_closed_form(region: Region, alpha: float) -> float:
    """R_U' = R_U - R_empty for g = r^alpha from the closed-form table.

    All six shapes (and translated disks) for alpha = 2; centered disks and
    annuli for general alpha.
    """
    k, a, b = region.kind, region.a, region.b
    if region.is_empty:
        return 0.0
    if alpha == 2:
        if k == "disk":
            return a ** 4 / 4
        if k == "annulus":
            if a == 0:
                return b ** 4 / 4
            return (b ** 4 - a ** 4) / 4 - (b * b - a * a) ** 2 / (4 * math.log(b / a))
        if k == "ellipse":
            return 0.5 * (a * b) ** 3 / (a * a + b * b)
        if k == "cardioid":
            return b ** 4 / 2 * (a * a + 1) ** 2 - b ** 4 / 4
        if k == "triangle":
            return a ** 4 / (2 * math.pi) * 9 * math.sqrt(3) / 80
        if k == "halfdisk":
            return a ** 4 / 2 * (0.5 - 4 / math.pi ** 2)
    if k == "disk" and region.center == 0:
        return alpha / 2 * a ** (2 * alpha) / 4
    if k == "annulus":
        if a == 0:
            return alpha / 2 * b ** (2 * alpha) / 4
        return alpha / 2 * (b ** (2 * alpha) / 4 - a ** (2 * alpha) / 4
                            - (b ** alpha - a ** alpha) ** 2 / (2 * alpha * math.log(b / a)))
    raise UnsupportedRegionError(
        f"no closed form for {k} with alpha={alpha:g}: the general-alpha table covers "
        "centered disks and annuli only")


def r_hole_from_balayage(region: Region, f: RadialField, candidate: BalayageCandidate,
                         measure: Optional[EquilibriumMeasure] = None,
                         mass_tol: float = 1e-6) -> float:
    """R_U = R_empty + (1/2)[int g dnu_2 - int g dmu_2] by quadrature."""
    measure = measure or equilibrium(f)
    check_admissible(region, measure.T)
    g_rad = _radial(lambda r: f.g(r))
    mu_mass = float(np.real(mu2_integral(region, measure, _radial(lambda r: np.ones_like(r)))))
    nu_mass = candidate.total_mass(region)
    if abs(nu_mass - mu_mass) > mass_tol:
        raise MassMismatchError(f"nu_2 mass {nu_mass:.12g} != mu_2(U) {mu_mass:.12g}")
    nu_g = float(np.real(candidate.integrate(region, lambda w: f.g(np.abs(w)))))
    mu_g = float(np.real(mu2_integral(region, measure, g_rad)))
    return measure.r_empty + 0.5 * (nu_g - mu_g)


def balayage_moment_residual(region: Region, candidate: BalayageCandidate, f: RadialField,
                             n_max: int, measure: Optional[EquilibriumMeasure] = None) -> float:
    """max over 0 <= n <= n_max of |int w^n dnu_2 - int_U w^n dmu_2|."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    measure = measure or equilibrium(f)
    powers = np.arange(n_max + 1)
    mom = lambda w: np.asarray(w)[:, None] ** powers[None, :]
    nu = candidate.integrate(region, mom)
    mu = mu2_integral(region, measure, mom, n_theta=96, n_rho=96)
    return float(np.max(np.abs(nu - mu)))


def triangle_moment_targets(a: float):
    """Mass and int t(1-t) dnu_2(t) per edge of the triangle sweep (quadratic field).

    The area side of the moment identity along one edge, with the scale a
    factored out, is int_0^1 (t + (1-t) w)^{3n} sqrt(3) a^2 / (2 pi (3n+2)) dt.
    n = 0 gives the edge mass; the real part at n = 1 gives
    int (1 - 9 t(1-t)/2) dnu_2, from which int t(1-t) dnu_2 follows.
    """
    if not 0 < a < 1:
        raise ValueError("triangle scale must lie in (0, 1)")
    omega = complex(-0.5, math.sqrt(3) / 2)
    rhs = lambda n: complex(gauss_kronrod(
        lambda t: (t + (1 - t) * omega) ** (3 * n) * math.sqrt(3) * a * a / (2 * math.pi * (3 * n + 2)),
        0.0, 1.0, abs_tol=1e-16, rel_tol=1e-14))
    m0 = rhs(0).real
    m1_real = rhs(1).real
    t_moment = (m0 - m1_real) * 2 / 9
    return m0, t_moment


def triangle_constraint_check(a: float, mass: float, t_moment: float) -> float:
    """Residual of a candidate's (mass, int t(1-t) dnu_2) against the moment identities."""
    m0, t1 = triangle_moment_targets(a)
    return max(abs(mass - m0), abs(t_moment - t1))


def triangle_energy_from_moment(a: float, t_moment: float, n=32) -> float:
    """R_U' for the triangle aT from int t(1-t) dnu_2, with the area term by quadrature.

    |a(t + (1-t) w)|^2 = a^2 (1 - 3t(1-t)); the mass term uses the n = 0 identity.
    """
    m0, _ = triangle_moment_targets(a)
    boundary = 3 * a * a * (m0 - 3 * t_moment)
    u, wu = gauss_legendre(n, 0.0, 1.0)
    t, wt = gauss_legendre(n, 0.0, 1.0)
    r = u[:, None]
    integrand = (1 - 3 * t[None, :] * (1 - t[None, :])) * r ** 3
    area = 3 * a * a * math.sqrt(3) * a * a / (2 * math.pi) * float(wu @ integrand @ wt)
    return 0.5 * (boundary - area)


def halfdisk_series_density(a: float, theta, terms: int = 10_000):
    """Partial sum of the sine series for the half-disk arc density (quadratic field)."""
    theta = np.asarray(theta, dtype=float)
    k = np.arange(1, terms + 1)
    coef = 1.0 / (4.0 * k * k - 1.0)
    return 4 * a * a / math.pi ** 2 * np.sin(np.multiply.outer(theta, 2 * k - 1)) @ coef


def halfdisk_series_constant(a: float, terms: int = 10_000) -> float:
    """R_U' for the half-disk through the truncated sine series of the arc density."""
    k = np.arange(1, terms + 1, dtype=float)
    s = np.sum(1 / (4 * k * k - 1) * (2 / (2 * k - 1) - 1 / (2 * k + 1) - 1 / (2 * k - 3)))
    boundary = 4 * a ** 4 / math.pi ** 2 * s
    area = a ** 4 / 4   # (1/pi) int_U |z|^2 over the half-disk
    return 0.5 * (boundary - area)


def decay_constant(region: Region, alpha: float) -> float:
    """lim r^(-2 alpha) log P[X_inf^(alpha)(rU) = 0] = R_empty - R_U = -R_U'.

    Closed forms are used where available; R_U' scales like a^(2 alpha) so
    shapes outside the support disk are fine. Otherwise falls back to the
    balayage quadrature with the known candidate.
    """
    try:
        return -r_hole_closed_form(region, alpha)
    except UnsupportedRegionError:
        f = power_field(alpha)
        cand = candidate_for(region, f, alpha2=(alpha == 2))
        meas = equilibrium(f)
        return -(r_hole_from_balayage(region, f, cand, meas) - meas.r_empty)


def annulus_decay_constant(c: float, alpha: float) -> float:
    """Decay constant of the annulus c < |z| < 1 (ratio form)."""
    return -alpha / 2 * (0.25 - c ** (2 * alpha) / 4 + (1 - c ** alpha) ** 2 / (2 * alpha * math.log(c)))


def r_hole_beta(region: Region, alpha: float, beta: float,
                candidate: Optional[BalayageCandidate] = None) -> float:
    """R_{U,beta} for g = r^alpha: the quadratic-field pipeline run with field (2/beta) g."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    f = power_field(alpha, 2.0 / beta)
    meas = equilibrium(f)
    if candidate is None:
        candidate = candidate_for(region, f, alpha2=(alpha == 2))
    return r_hole_from_balayage(region, f, candidate, meas)
