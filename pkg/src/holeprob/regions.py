"""Hole shapes: membership, boundary parameterizations and polar descriptions.

Every shape is star-shaped with respect to the origin except off-center
disks that miss it; all are described in polar form as a set of angular
pieces, each with a radial interval [rho_in(theta), rho_out(theta)]. The
polar description drives both area quadrature and the Gram matrix.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable, List, Tuple

import numpy as np

from .quadrature import gauss_legendre, gl_panels

__all__ = ["Region", "BoundaryPart", "PolarPiece", "KINDS"]

KINDS = ("empty", "disk", "annulus", "ellipse", "cardioid", "triangle", "halfdisk")
OMEGA = cmath.exp(2j * math.pi / 3)


@dataclass
class BoundaryPart:
    """A boundary arc w(t), t in [t0, t1], with derivative dw/dt."""

    name: str
    t0: float
    t1: float
    w: Callable
    dw: Callable
    breakpoints: Tuple[float, ...] = ()

    def nodes(self, n_per_panel=32, panels=8):
        edges = np.unique(np.concatenate([np.linspace(self.t0, self.t1, panels + 1),
                                          [p for p in self.breakpoints if self.t0 < p < self.t1]]))
        return gl_panels(edges, n_per_panel)


@dataclass
class PolarPiece:
    """Angular nodes/weights with the radial extent of the region along each ray."""

    theta: np.ndarray
    weight: np.ndarray
    rho_in: np.ndarray
    rho_out: np.ndarray


@dataclass(frozen=True)
class Region:
    """A hole shape.

    kind      one of KINDS
    a, b      shape parameters (see ``describe``)
    center    center of a disk (other shapes are centered at the origin)
    boundary_contact
              set when the closure may touch the support circle |z| = T;
              admissibility checks are relaxed accordingly
    """

    kind: str
    a: float = 0.0
    b: float = 0.0
    center: complex = 0j
    boundary_contact: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}")
        a, b = self.a, self.b
        if self.kind == "annulus" and not 0 <= a < b:
            raise ValueError("annulus needs 0 <= a < b (inner, outer radius)")
        if self.kind == "ellipse" and not (a > 0 and b > 0):
            raise ValueError("ellipse needs a, b > 0")
        if self.kind == "cardioid" and not (0 <= a < 0.5 and b > 0):
            raise ValueError("cardioid r < b(1 + 2a cos t) needs 0 <= a < 1/2, b > 0")
        if self.kind in ("disk", "triangle", "halfdisk") and a < 0:
            raise ValueError("radius/scale must be nonnegative")
        if self.kind != "disk" and self.center != 0:
            raise ValueError("only disks may be translated")

    # -- constructors -------------------------------------------------
    @classmethod
    def disk(cls, a, center=0j):
        return cls("disk", a=float(a), center=complex(center))

    @classmethod
    def annulus(cls, inner, outer):
        return cls("annulus", a=float(inner), b=float(outer))

    @classmethod
    def ellipse(cls, a, b):
        return cls("ellipse", a=float(a), b=float(b))

    @classmethod
    def cardioid(cls, a, b):
        return cls("cardioid", a=float(a), b=float(b))

    @classmethod
    def triangle(cls, a):
        return cls("triangle", a=float(a))

    @classmethod
    def halfdisk(cls, a):
        return cls("halfdisk", a=float(a))

    @classmethod
    def empty(cls):
        return cls("empty")

    def describe(self) -> str:
        return {
            "empty": "empty set",
            "disk": f"disk |z - {self.center}| < {self.a}",
            "annulus": f"annulus {self.a} < |z| < {self.b}",
            "ellipse": f"ellipse x^2/{self.a}^2 + y^2/{self.b}^2 < 1",
            "cardioid": f"cardioid r < {self.b}(1 + 2*{self.a} cos t)",
            "triangle": f"triangle with vertices {self.a} * cube roots of unity",
            "halfdisk": f"half-disk 0 < r < {self.a}, 0 < t < pi",
        }[self.kind]

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty" or (self.kind in ("disk", "triangle", "halfdisk") and self.a == 0) \
            or (self.kind == "cardioid" and self.b == 0)

    def scaled(self, s: float) -> "Region":
        if self.kind == "cardioid":
            return replace(self, b=self.b * s)
        return replace(self, a=self.a * s, b=self.b * s, center=self.center * s)

    def params(self) -> dict:
        out = {"kind": self.kind, "a": self.a, "b": self.b}
        if self.kind == "disk":
            out["center_re"] = self.center.real
            out["center_im"] = self.center.imag
        return out

    # -- geometry -----------------------------------------------------
    def outer_radius(self) -> float:
        """max |z| over the closure."""
        k = self.kind
        if self.is_empty:
            return 0.0
        if k == "disk":
            return abs(self.center) + self.a
        if k == "annulus":
            return self.b
        if k == "ellipse":
            return max(self.a, self.b)
        if k == "cardioid":
            return self.b * (1 + 2 * self.a)
        return self.a  # triangle vertices, half-disk arc

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        k = self.kind
        if self.is_empty:
            return np.zeros(z.shape, dtype=bool)
        if k == "disk":
            return np.abs(z - self.center) < self.a
        if k == "annulus":
            return (np.abs(z) > self.a) & (np.abs(z) < self.b)
        if k == "ellipse":
            return (z.real / self.a) ** 2 + (z.imag / self.b) ** 2 < 1
        if k == "cardioid":
            return np.abs(z) < self.b * (1 + 2 * self.a * np.cos(np.angle(z)))
        if k == "triangle":
            # inside iff on the inner side of the three edge lines at distance a/2
            ok = np.ones(z.shape, dtype=bool)
            for p in range(3):
                normal = cmath.exp(1j * (math.pi / 3 + 2 * math.pi * p / 3))
                ok &= (z * np.conj(normal)).real < self.a / 2
            return ok
        if k == "halfdisk":
            return (np.abs(z) < self.a) & (z.imag > 0)
        raise AssertionError(k)

    def area(self) -> float:
        k = self.kind
        if self.is_empty:
            return 0.0
        if k == "disk":
            return math.pi * self.a ** 2
        if k == "annulus":
            return math.pi * (self.b ** 2 - self.a ** 2)
        if k == "ellipse":
            return math.pi * self.a * self.b
        if k == "cardioid":
            return math.pi * self.b ** 2 * (1 + 2 * self.a ** 2)
        if k == "triangle":
            return 3 * math.sqrt(3) / 4 * self.a ** 2
        if k == "halfdisk":
            return math.pi * self.a ** 2 / 2
        raise AssertionError(k)

    def boundary_parts(self) -> List[BoundaryPart]:
        k, a, b, c0 = self.kind, self.a, self.b, self.center
        two_pi = 2 * math.pi
        if self.is_empty:
            return []
        if k == "disk":
            return [BoundaryPart("circle", 0.0, two_pi,
                                 lambda t: c0 + a * np.exp(1j * t),
                                 lambda t: 1j * a * np.exp(1j * t))]
        if k == "annulus":
            return [
                BoundaryPart("inner", 0.0, two_pi, lambda t: a * np.exp(1j * t),
                             lambda t: 1j * a * np.exp(1j * t)),
                BoundaryPart("outer", 0.0, two_pi, lambda t: b * np.exp(1j * t),
                             lambda t: 1j * b * np.exp(1j * t)),
            ]
        if k == "ellipse":
            return [BoundaryPart("ellipse", 0.0, two_pi,
                                 lambda t: a * np.cos(t) + 1j * b * np.sin(t),
                                 lambda t: -a * np.sin(t) + 1j * b * np.cos(t))]
        if k == "cardioid":
            return [BoundaryPart(
                "cardioid", 0.0, two_pi,
                lambda t: b * (1 + 2 * a * np.cos(t)) * np.exp(1j * t),
                lambda t: b * (-2 * a * np.sin(t) + 1j * (1 + 2 * a * np.cos(t))) * np.exp(1j * t))]
        if k == "triangle":
            parts = []
            for p in range(3):
                v0, v1 = a * OMEGA ** p, a * OMEGA ** (p + 1)
                parts.append(BoundaryPart(
                    f"edge{p}", 0.0, 1.0,
                    lambda t, v0=v0, v1=v1: t * v0 + (1 - t) * v1,
                    lambda t, v0=v0, v1=v1: np.full(np.shape(t), v0 - v1, dtype=complex)))
            return parts
        if k == "halfdisk":
            return [
                BoundaryPart("diameter", -a, a, lambda t: np.asarray(t, dtype=complex),
                             lambda t: np.ones(np.shape(t), dtype=complex), breakpoints=(0.0,)),
                BoundaryPart("arc", 0.0, math.pi, lambda t: a * np.exp(1j * t),
                             lambda t: 1j * a * np.exp(1j * t)),
            ]
        raise AssertionError(k)

    def polar_pieces(self, n: int = 64) -> List[PolarPiece]:
        """Angular quadrature (``n`` Gauss nodes per panel) with radial extents."""
        k, a, b = self.kind, self.a, self.b
        if self.is_empty:
            return []
        two_pi = 2 * math.pi
        if k == "disk" and self.center != 0:
            return self._offcenter_disk_pieces(n)
        if k in ("disk", "annulus", "ellipse", "cardioid"):
            th, w = gl_panels(np.linspace(0, two_pi, 5), n)
            if k == "disk":
                lo, hi = np.zeros_like(th), np.full_like(th, a)
            elif k == "annulus":
                lo, hi = np.full_like(th, a), np.full_like(th, b)
            elif k == "ellipse":
                lo = np.zeros_like(th)
                hi = a * b / np.sqrt((b * np.cos(th)) ** 2 + (a * np.sin(th)) ** 2)
            else:
                lo, hi = np.zeros_like(th), b * (1 + 2 * a * np.cos(th))
            return [PolarPiece(th, w, lo, hi)]
        if k == "triangle":
            pieces = []
            for p in range(3):
                th, w = gl_panels(np.linspace(two_pi * p / 3, two_pi * (p + 1) / 3, 3), n)
                mid = two_pi * p / 3 + math.pi / 3
                pieces.append(PolarPiece(th, w, np.zeros_like(th), (a / 2) / np.cos(th - mid)))
            return pieces
        if k == "halfdisk":
            th, w = gl_panels(np.linspace(0, math.pi, 3), n)
            return [PolarPiece(th, w, np.zeros_like(th), np.full_like(th, a))]
        raise AssertionError(k)

    def angular_support(self) -> List[Tuple[float, float]]:
        """Angle intervals whose rays meet the region (matching ``polar_pieces``)."""
        if self.is_empty:
            return []
        if self.kind == "halfdisk":
            return [(0.0, math.pi)]
        if self.kind == "disk" and abs(self.center) >= self.a:
            phi0 = cmath.phase(self.center)
            delta = math.asin(min(1.0, self.a / abs(self.center)))
            return [(phi0 - delta, phi0 + delta)]
        return [(0.0, 2 * math.pi)]

    def _offcenter_disk_pieces(self, n):
        a, c0 = self.a, self.center
        d = abs(c0)
        phi0 = cmath.phase(c0)
        if d < a:
            th, w = gl_panels(np.linspace(0, 2 * math.pi, 5), n)
            p = d * np.cos(th - phi0)
            hi = p + np.sqrt(p * p - d * d + a * a)
            return [PolarPiece(th, w, np.zeros_like(th), hi)]
        # rays meet the disk for |theta - phi0| < asin(a/d); theta = phi0 + delta sin(u)
        # removes the square-root behaviour at the tangent rays
        delta = math.asin(min(1.0, a / d))
        u, wu = gl_panels(np.linspace(-math.pi / 2, math.pi / 2, 5), n)
        th = phi0 + delta * np.sin(u)
        w = wu * delta * np.cos(u)
        p = d * np.cos(th - phi0)
        disc = np.sqrt(np.maximum(p * p - d * d + a * a, 0.0))
        return [PolarPiece(th, w, p - disc, p + disc)]

    def area_quadrature(self, n_theta: int = 64, n_rho: int = 48, grade: float = 1.0):
        """Nodes z and weights w with sum(w f(z)) ~ integral of f over the region.

        ``grade > 1`` clusters radial nodes toward rho_in via rho = rho_in + L u^grade,
        which tames r^(alpha-2) densities at the origin.
        """
        zs, ws = [], []
        u, wu = gauss_legendre(n_rho, 0.0, 1.0)
        for piece in self.polar_pieces(n_theta):
            span = piece.rho_out - piece.rho_in
            rho = piece.rho_in[:, None] + span[:, None] * u[None, :] ** grade
            jac = span[:, None] * grade * u[None, :] ** (grade - 1)
            weight = piece.weight[:, None] * wu[None, :] * jac * rho
            zs.append((rho * np.exp(1j * piece.theta[:, None])).ravel())
            ws.append(weight.ravel())
        if not zs:
            return np.empty(0, dtype=complex), np.empty(0)
        return np.concatenate(zs), np.concatenate(ws)

    def nearest_boundary_point(self, z: complex, samples: int = 2048) -> complex:
        """Closest point of the boundary to z (dense sampling plus local refinement)."""
        best, best_d = None, math.inf
        for part in self.boundary_parts():
            t = np.linspace(part.t0, part.t1, samples)
            w = part.w(t)
            dist = np.abs(w - z)
            i = int(np.argmin(dist))
            lo, hi = t[max(i - 1, 0)], t[min(i + 1, samples - 1)]
            for _ in range(40):  # golden-section on the bracketing cell
                m1 = hi - 0.618033988749895 * (hi - lo)
                m2 = lo + 0.618033988749895 * (hi - lo)
                if abs(part.w(np.array([m1]))[0] - z) < abs(part.w(np.array([m2]))[0] - z):
                    hi = m2
                else:
                    lo = m1
            cand = part.w(np.array([0.5 * (lo + hi)]))[0]
            if abs(cand - z) < best_d:
                best, best_d = complex(cand), abs(cand - z)
        return best
