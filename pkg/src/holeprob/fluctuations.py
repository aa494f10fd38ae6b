"""Number and linear-statistic variances for the unit-disk ensembles X_L.

X_L has kernel K_L(z, w) = (1 - z conj(w))^(-(L+1)) with respect to
dmu_L = (L/pi)(1 - |z|^2)^(L-1) dm. With s = (1 - rho^2)^L each radial
measure becomes ds dtheta / 2pi, and after one angular integration

    V[X_L(rD)] = (1/2pi) int_{s1 > d} int_{s2 < d} A(x) ds2 ds1
    V[X_L(phi)] = (1/4pi) int int (phi1 - phi2)^2 A(x) ds1 ds2

where d = (1 - r^2)^L, x = rho1 rho2 and
A(x) = int_0^{2pi} (1 + x^2 - 2x cos t)^(-(L+1)) dt.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .quadrature import gauss_kronrod, gl_panels

__all__ = [
    "HyperbolicEnsemble",
    "VarianceResult",
    "angular_kernel_integral",
    "variance_count",
    "variance_linear",
    "mean_count",
    "power_statistic",
    "theta_scale",
    "lower_bound",
    "upper_bound",
    "R_MAX",
]

R_MAX = 0.999


@dataclass(frozen=True)
class HyperbolicEnsemble:
    L: float

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be positive")

    def kernel(self, z, w):
        return (1 - np.asarray(z) * np.conj(w)) ** (-(self.L + 1))

    def density(self, z):
        """Density of mu_L with respect to area measure."""
        return self.L / math.pi * (1 - np.abs(z) ** 2) ** (self.L - 1)

    def rho_of_s(self, s):
        """Radius for the variable s = (1 - rho^2)^L."""
        return np.sqrt(np.clip(1 - np.power(s, 1.0 / self.L), 0.0, 1.0))


@dataclass(frozen=True)
class VarianceResult:
    value: float
    r: float
    normalization: float   # the Theta-scale; value / normalization should stay bounded
    error: float = 0.0

    @property
    def normalized(self) -> float:
        return self.value / self.normalization


def lower_bound(L: float) -> float:
    """Lower constant for (1 - r) V[X_L(rD)] as r -> 1."""
    return 1.0 / (math.pi * 2 ** (L + 2) * 3 ** (2 * L))


def upper_bound(L: float) -> float:
    """Upper constant for (1 - r) V[X_L(rD)]."""
    return L / 2.0


def _check_r(r):
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    if r > R_MAX:
        raise ValueError(f"r is capped at {R_MAX}")


@lru_cache(maxsize=8)
def _angle_rule(nodes=16, h0=1e-7):
    # panels shrinking geometrically toward t = 0, where the integrand peaks as x -> 1
    edges = [0.0]
    h = h0
    while h < math.pi / 2:
        edges.append(h)
        h *= 2
    edges.append(math.pi)
    return gl_panels(np.array(edges), nodes)


def angular_kernel_integral(x, L: float):
    """A(x) = int_0^{2pi} (1 + x^2 - 2 x cos t)^(-(L+1)) dt, 0 <= x < 1.

    The base 1 + x^2 - 2x cos t is written as (1 - x)^2 + 4x sin^2(t/2)
    to keep it accurate when x is close to 1.
    """
    x = np.asarray(x, dtype=float)
    t, w = _angle_rule()
    base = (1 - x[..., None]) ** 2 + 4 * x[..., None] * np.sin(t / 2) ** 2
    return 2.0 * (base ** (-(L + 1)) @ w)


def _block(L, s1_range, s2_range, weight, tol, points1=(), points2=()):
    """int over s1 in s1_range, s2 in s2_range of weight * A ds2 ds1."""
    ens = HyperbolicEnsemble(L)
    lo2, hi2 = s2_range

    def outer(s1):
        rho1 = ens.rho_of_s(s1)
        return _inner_points(L, lo2, hi2, weight, rho1, tol, points2)

    return float(gauss_kronrod(outer, s1_range[0], s1_range[1], abs_tol=0.0, rel_tol=tol,
                               points=points1, limit=4000))


def _inner_points(L, lo, hi, weight, outer_rho, tol, points):
    ens = HyperbolicEnsemble(L)

    def f(s2):
        rho2 = ens.rho_of_s(s2)
        a = angular_kernel_integral(rho2[:, None] * outer_rho[None, :], L)
        if weight is not None:
            a = a * weight(rho2[:, None], outer_rho[None, :])
        return a

    return gauss_kronrod(f, lo, hi, abs_tol=0.0, rel_tol=tol, points=points, limit=4000)


def _graded_points(d, lo, hi, levels=12):
    """Breakpoints on (lo, hi) clustering geometrically at d, where the integrand peaks."""
    pts = []
    for k in range(1, levels + 1):
        pts += [d - (d - lo) * 2.0 ** (-k), d + (hi - d) * 2.0 ** (-k)]
    return tuple(sorted({p for p in pts if lo < p < hi}))


def theta_scale(r: float, p: Optional[float] = None) -> float:
    """Growth scale of the variance as r -> 1: 1/(1-r) for counts, per-regime for phi_p."""
    if p is None:
        return 1.0 / (1 - r)
    if p > 1:
        return 1.0
    if p == 1:
        return -math.log(1 - r)
    return (1 - r) ** (-(1 - p))


def variance_count(L: float, r: float, tol: float = 1e-8) -> VarianceResult:
    """V[X_L(rD)] by nested adaptive quadrature over (s1, s2) and the graded angular rule."""
    HyperbolicEnsemble(L)
    _check_r(r)
    d = (1 - r * r) ** L
    pts_in = _graded_points(d, 0.0, d, levels=8)
    pts_out = _graded_points(d, d, 1.0, levels=12)
    val = _block(L, (d, 1.0), (0.0, d), None, tol, points1=pts_out, points2=pts_in) / (2 * math.pi)
    return VarianceResult(val, r, theta_scale(r))


def power_statistic(r: float, p: float) -> Callable:
    """phi_p(rho) = (1 - rho^2 / r^2)_+^(p/2)."""
    def phi(rho):
        return np.power(np.clip(1 - (np.asarray(rho) / r) ** 2, 0.0, None), p / 2)
    return phi


def variance_linear(L: float, r: float, p: Optional[float] = None, phi: Optional[Callable] = None,
                    tol: float = 1e-8) -> VarianceResult:
    """V[X_L(phi)] for a radial statistic vanishing outside |z| = r.

    ``phi`` defaults to phi_p. The square [0, 1]^2 in (s1, s2) is split at
    d = (1 - r^2)^L, where phi has its kink or jump; the block with both
    points outside rD contributes nothing and the two mixed blocks are equal.
    """
    HyperbolicEnsemble(L)
    _check_r(r)
    if phi is None:
        if p is None or not p > 0:
            raise ValueError("need p > 0 or an explicit phi")
        phi = power_statistic(r, p)
    d = (1 - r * r) ** L
    pts_in = _graded_points(d, 0.0, d, levels=8)
    pts_out = _graded_points(d, d, 1.0, levels=12)
    mixed = _block(L, (d, 1.0), (0.0, d), lambda r2, r1: phi(r1) ** 2, tol,
                   points1=pts_out, points2=pts_in)
    both_in = _block(L, (d, 1.0), (d, 1.0), lambda r2, r1: (phi(r1) - phi(r2)) ** 2, tol,
                     points1=pts_out, points2=pts_out)
    val = (2 * mixed + both_in) / (4 * math.pi)
    return VarianceResult(val, r, theta_scale(r, p) if phi is not None and p is not None else 1.0)


def mean_count(L: float, r: float, check: bool = True, tol: float = 1e-10) -> float:
    """E[X_L(rD)] = L r^2 / (1 - r^2), cross-checked against int_{rD} K(z,z) dmu_L."""
    HyperbolicEnsemble(L)
    if r == 0:
        return 0.0
    if not 0 < r < 1:
        raise ValueError("r must lie in [0, 1)")
    closed = L * r * r / (1 - r * r)
    if check:
        # 2 pi rho K(rho, rho) (L/pi)(1 - rho^2)^(L-1) = 2 L rho (1 - rho^2)^(-2)
        quad = float(gauss_kronrod(lambda rho: 2 * L * rho / (1 - rho * rho) ** 2, 0.0, r,
                                   abs_tol=1e-15, rel_tol=1e-14))
        if abs(quad - closed) > tol * max(1.0, closed):
            raise ArithmeticError(f"mean count mismatch: closed {closed!r} vs quadrature {quad!r}")
    return closed
