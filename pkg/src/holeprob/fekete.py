"""Weighted Fekete points in the complement of a hole.

Maximizes sum_{i<j} [log|z_i - z_j| - g(|z_i|)/2 - g(|z_j|)/2] over n points
of U^c by projected gradient ascent (Barzilai-Borwein trial step, Armijo
backtracking) from several random starts drawn from the equilibrium measure.
The normalized quantity delta_n = exp(-2 F / (n(n-1))) tends to exp(-R_U).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from .potential import RadialField, power_field, solve_T
from .regions import Region

__all__ = [
    "FeketeResult",
    "InfeasibleRegionError",
    "objective",
    "delta_n",
    "separation",
    "project_outside",
    "sample_equilibrium",
    "optimize_fekete",
]

COLLISION_FLOOR = 1e-9


class InfeasibleRegionError(ValueError):
    """The hole swallows the whole equilibrium support."""


@dataclass
class FeketeResult:
    points: np.ndarray
    delta_n: float
    energy: float
    min_separation: float
    objective: float
    seed: int
    iterations: int
    converged: bool
    meta: dict = field(default_factory=dict)


def _pairs(z):
    d = z[:, None] - z[None, :]
    dist = np.abs(d)
    np.fill_diagonal(dist, np.inf)
    return d, np.maximum(dist, COLLISION_FLOOR)


def objective(z, f: RadialField) -> float:
    """sum_{i<j} log|z_i - z_j| - (n - 1)/2 sum_i g(|z_i|)."""
    z = np.asarray(z, dtype=complex)
    n = z.size
    _, dist = _pairs(z)
    iu = np.triu_indices(n, 1)
    return float(np.sum(np.log(dist[iu])) - 0.5 * (n - 1) * np.sum(f.g(np.abs(z))))


def delta_n(z, f: RadialField) -> float:
    """(prod_{i<j} |z_i - z_j| w(z_i) w(z_j))^(2/(n(n-1))), w = exp(-g/2)."""
    n = len(z)
    return math.exp(2.0 * objective(z, f) / (n * (n - 1)))


def _gradient(z, f: RadialField):
    """Gradient as a complex number per point (d/dx + i d/dy)."""
    n = z.size
    d, dist = _pairs(z)
    rep = np.sum(d / dist ** 2, axis=1)
    r = np.abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        radial = np.where(r > 0, f.g1(r) * z / r, 0.0)
    return rep - 0.5 * (n - 1) * radial


def separation(points) -> float:
    """min_{i != k} |z_i - z_k|."""
    z = np.asarray(points, dtype=complex)
    if z.size < 2:
        raise ValueError("separation needs at least two points")
    dist = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(dist, np.inf)
    return float(dist.min())


def project_outside(z, region: Optional[Region]):
    """Map points inside the hole to the nearest boundary point."""
    z = np.array(z, dtype=complex)
    if region is None or region.is_empty:
        return z
    inside = region.contains(z)
    if not inside.any():
        return z
    k, a, b, c0 = region.kind, region.a, region.b, region.center
    zi = z[inside]
    if k == "disk":
        u = zi - c0
        # the exact center has no nearest point; break the tie toward larger radius
        ok = np.abs(u) > 1e-150
        phase = np.where(ok, u / np.where(ok, np.abs(u), 1.0), c0 / abs(c0) if c0 != 0 else 1.0)
        z[inside] = c0 + a * phase
    elif k == "annulus":
        r = np.abs(zi)
        ok = r > 1e-150
        phase = np.where(ok, zi / np.where(ok, r, 1.0), 1.0)
        z[inside] = np.where(b - r <= r - a, b, a) * phase
    else:
        z[inside] = [region.nearest_boundary_point(p) for p in zi]
    return z


def _inverse_radial_cdf(f: RadialField, T: float, u):
    """Equilibrium mass inside radius r is r g'(r) / 2; invert it."""
    u = np.atleast_1d(u)
    out = np.empty(u.shape)
    for i, ui in enumerate(u):
        target = 2.0 * ui
        out[i] = 0.0 if target <= 0 else brentq(lambda r: r * f.g1(r) - target, 0.0, T, xtol=1e-14)
    return out


def sample_equilibrium(n: int, f: RadialField, rng: np.random.Generator, T: Optional[float] = None):
    """n i.i.d. points from the equilibrium measure (inverse radial CDF, uniform angle)."""
    T = solve_T(f) if T is None else T
    r = _inverse_radial_cdf(f, T, rng.uniform(1e-12, 1.0, size=n))
    return r * np.exp(2j * math.pi * rng.uniform(size=n))


def _ascend(z, f, region, budget, gtol):
    F = objective(z, f)
    grad = _gradient(z, f)
    step = 1e-2 / max(1.0, float(np.max(np.abs(grad))))
    prev_z = prev_g = None
    converged = False
    stalled = 0
    it = 0
    for it in range(1, budget + 1):
        if prev_z is not None:
            s, y = z - prev_z, grad - prev_g
            sy = float(np.real(np.vdot(s, y)))
            if sy < 0:
                step = float(np.real(np.vdot(s, s))) / -sy   # BB step for ascent
        accepted = False
        for _ in range(60):
            trial = project_outside(z + step * grad, region)
            Ft = objective(trial, f)
            gain = float(np.real(np.vdot(grad, trial - z)))
            if Ft >= F + 1e-4 * gain and Ft >= F:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        prev_z, prev_g = z, grad
        z, F = trial, Ft
        grad = _gradient(z, f)
        moved = float(np.max(np.abs(z - prev_z)))
        stalled = stalled + 1 if Ft - objective(prev_z, f) <= 1e-12 * max(1.0, abs(F)) else 0
        if moved < gtol or stalled >= 20:
            converged = True
            break
    return z, F, it, converged


def optimize_fekete(n: int, f: Optional[RadialField] = None, region: Optional[Region] = None,
                    seed: int = 0, budget: int = 5000, starts: int = 3,
                    gtol: float = 1e-11) -> FeketeResult:
    """Best local maximizer over ``starts`` random initializations (seeds seed, seed+1, ...)."""
    if n < 2:
        raise ValueError("Fekete points need n >= 2")
    f = power_field(2.0) if f is None else f
    T = solve_T(f)
    if region is not None and not region.is_empty:
        probe = T * np.exp(2j * math.pi * np.arange(64) / 64)
        if np.all(region.contains(probe)) and region.contains(np.array([0j]))[0]:
            raise InfeasibleRegionError("hole covers the equilibrium support")
    best = None
    for s in range(seed, seed + starts):
        rng = np.random.Generator(np.random.Philox(key=s))
        z0 = project_outside(sample_equilibrium(n, f, rng, T), region)
        z, F, it, conv = _ascend(z0, f, region, budget, gtol)
        if best is None or F > best[1]:
            best = (z, F, it, conv, s)
    z, F, it, conv, s = best
    energy = -2.0 * F / (n * (n - 1))
    meta = {} if conv else {"warning": "iteration budget exhausted"}
    return FeketeResult(z, math.exp(-energy), energy, separation(z), F, s, it, conv, meta)
