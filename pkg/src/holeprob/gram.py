"""Hole probabilities of arbitrary shapes through the Gram determinant.

P[X_n^(alpha)(V) = 0] = det M with M_ij = int_{V^c} phi_i conj(phi_j) dm and
phi_k(z) = sqrt(alpha / (2 pi Gamma(2(k+1)/alpha))) z^k exp(-|z|^alpha / 2).

In polar form the radial integral is an incomplete gamma function, so each
entry is a one-dimensional angular integral:

    M_ij = (1/2pi) int e^{i(i-j)t} G_ij [Q(s, rho_out^a) + P(s, rho_in^a)] dt

over the angles whose rays meet V, plus G_ij times the plain angular integral
over the remaining angles, with s = (a_i + a_j)/2, a_k = 2(k+1)/alpha and
G_ij = Gamma(s) / sqrt(Gamma(a_i) Gamma(a_j)) <= 1. Working with the
complement directly keeps tiny diagonal entries (deep holes) accurate.

The Fredholm series oracle is a Nystrom discretization of the correlation
kernel on the hole.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .radial import fit_decay_slope
from .regions import Region
from .specfun import log_reg_gamma_p, log_reg_gamma_q, mittag_leffler, reg_gamma_p

__all__ = [
    "GramSpec",
    "FredholmResult",
    "NonBracketingError",
    "gram_matrix",
    "hole_prob_gram",
    "fredholm_hole_oracle",
    "fredholm_mean_count",
    "decay_fit_gram",
]

MAX_GAMMA_ARG = 1e7


class NonBracketingError(ArithmeticError):
    """Fredholm partial sums do not alternate: the hole is too large for the oracle."""


@dataclass(frozen=True)
class GramSpec:
    """n x n Gram matrix of the hole ``region`` (already scaled) in X_n^(alpha)."""

    n: int
    alpha: float
    region: Region
    quad: int = 16          # Gauss nodes per angular panel at the start of refinement
    tol: float = 1e-10      # entrywise change that stops resolution doubling
    max_quad: int = 1024

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError("n must be >= 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if 2.0 * self.n / self.alpha > MAX_GAMMA_ARG:
            raise OverflowError("Gamma argument 2n/alpha exceeds the supported range")


def _log_g(n, alpha):
    """log G_ij and the shape s_ij, as n x n arrays."""
    a = 2.0 * np.arange(1, n + 1) / alpha
    s = 0.5 * (a[:, None] + a[None, :])
    lg = gammaln(a)
    return gammaln(s) - 0.5 * (lg[:, None] + lg[None, :]), s


def _arc_fourier(m, t0, t1):
    """int_{t0}^{t1} e^{i m t} dt for integer array m."""
    m = np.asarray(m)
    out = np.empty(m.shape, dtype=complex)
    zero = m == 0
    out[zero] = t1 - t0
    mm = m[~zero]
    out[~zero] = (np.exp(1j * mm * t1) - np.exp(1j * mm * t0)) / (1j * mm)
    return out


def _gram_at(spec: GramSpec, quad: int) -> np.ndarray:
    n, alpha, region = int(spec.n), spec.alpha, spec.region
    log_g, _ = _log_g(n, alpha)
    # distinct shapes depend on i + j only
    shapes = (np.arange(2 * n - 1) + 2.0) / alpha
    idx = np.add.outer(np.arange(n), np.arange(n))
    diff = np.subtract.outer(np.arange(n), np.arange(n))
    acc = np.zeros((n, n), dtype=complex)
    covered = np.zeros((n, n), dtype=complex)
    for piece in region.polar_pieces(quad):
        x_out = piece.rho_out ** alpha
        x_in = piece.rho_in ** alpha
        lq = log_reg_gamma_q(shapes[:, None], x_out[None, :])
        lp = np.where(x_in[None, :] > 0, log_reg_gamma_p(shapes[:, None], np.maximum(x_in, 0)[None, :]),
                      -np.inf)
        weight = np.exp(np.logaddexp(lq, lp))            # (2n-1, nodes)
        phase = np.exp(1j * np.outer(np.arange(n), piece.theta))   # (n, nodes)
        # sum_t w_t e^{i(i-j)t} weight[i+j, t]
        for m in range(2 * n - 1):
            mask = idx == m
            ii, jj = np.nonzero(mask)
            vals = (phase[ii] * np.conj(phase[jj]) * (piece.weight * weight[m])[None, :]).sum(axis=1)
            acc[ii, jj] += vals
    for t0, t1 in region.angular_support():
        covered += _arc_fourier(diff, t0, t1)
    outside = _arc_fourier(diff, 0.0, 2 * math.pi) - covered
    M = np.exp(log_g) * (acc + outside) / (2 * math.pi)
    return 0.5 * (M + M.conj().T)


def gram_matrix(spec: GramSpec, return_quad: bool = False):
    """Hermitian Gram matrix, refined by doubling the angular resolution."""
    if spec.region.is_empty:
        M = np.eye(int(spec.n), dtype=complex)
        return (M, 0) if return_quad else M
    quad = int(spec.quad)
    prev = _gram_at(spec, quad)
    while True:
        nxt = quad * 2
        if nxt > spec.max_quad:
            raise ArithmeticError(
                f"Gram matrix did not settle to {spec.tol:g} by {spec.max_quad} nodes per panel")
        cur = _gram_at(spec, nxt)
        change = float(np.max(np.abs(cur - prev)))
        quad, prev = nxt, cur
        if change < spec.tol:
            return (cur, quad) if return_quad else cur


def hole_prob_gram(spec: GramSpec, matrix: Optional[np.ndarray] = None) -> float:
    """log det M by Cholesky; -inf when the factorization breaks down."""
    M = gram_matrix(spec) if matrix is None else matrix
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        return -math.inf
    d = np.real(np.diag(L))
    if np.any(d <= 0):
        return -math.inf
    return float(2.0 * np.sum(np.log(d)))


# -- Fredholm series oracle ------------------------------------------------

@dataclass
class FredholmResult:
    partial_sums: list
    lower: float
    upper: float
    mean_count: float
    terms: list = field(default_factory=list)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def estimate(self) -> float:
        return self.partial_sums[-1]

    def contains(self, p: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= p <= self.upper + slack


def _kernel(z, alpha, n):
    """Correlation kernel matrix K(z_i, z_j) of X_n^(alpha) (n=None: infinite)."""
    zw = np.outer(z, np.conj(z))
    if n is None:
        a = 2.0 / alpha
        series = mittag_leffler(a, a, zw)
    else:
        series = np.zeros_like(zw)
        log_abs = np.log(np.abs(zw) + 1e-300)
        ph = np.exp(1j * np.angle(zw))
        for k in range(int(n)):
            series = series + np.exp(k * log_abs - math.lgamma(2.0 * (k + 1) / alpha)) * ph ** k
    damp = np.exp(-np.abs(z) ** alpha / 2)
    return alpha / (2 * math.pi) * series * np.outer(damp, damp)


def _elementary_symmetric(power_traces, m):
    """e_1..e_m from p_k = tr(K^k) by Newton's identities."""
    e = [1.0]
    for k in range(1, m + 1):
        s = 0.0
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * power_traces[i - 1]
        e.append(s / k)
    return e


def fredholm_hole_oracle(region: Region, alpha: float, n: Optional[int] = None, order: int = 4,
                         n_theta: int = 16, n_rho: int = 16) -> FredholmResult:
    """Partial sums 1 - e_1 + e_2 - ... of the inclusion-exclusion series.

    The m-fold integrals of det[K(x_i, x_j)] are taken with the tensor power
    of one area rule; with weights folded into the symmetric Nystrom matrix
    that tensor sum equals m! e_m(eigenvalues), so the m-th term is e_m.
    Consecutive partial sums bracket the hole probability.
    """
    if not 1 <= order <= 4:
        raise ValueError("order must be in 1..4")
    z, w = region.area_quadrature(n_theta, n_rho, grade=1.0)
    sw = np.sqrt(w)
    Kw = sw[:, None] * _kernel(z, alpha, n) * sw[None, :]
    Kw = 0.5 * (Kw + Kw.conj().T)
    traces = []
    P = np.eye(len(z), dtype=complex)
    for _ in range(order):
        P = P @ Kw
        traces.append(float(np.real(np.trace(P))))
    e = _elementary_symmetric(traces, order)
    sums, total = [], 0.0
    for k in range(order + 1):
        total += (-1) ** k * e[k]
        sums.append(total)
    # alternation: each new partial sum falls on the other side of the previous one
    # consecutive sums bracket the limit only if they alternate with shrinking steps
    for k in range(1, order):
        if (sums[k] - sums[k - 1]) * (sums[k + 1] - sums[k]) > 0 or e[k + 1] > e[k]:
            raise NonBracketingError("partial sums do not alternate into a bracket; hole too large")
    lo, hi = sorted(sums[-2:])
    return FredholmResult(sums, lo, hi, traces[0], e[1:])


def fredholm_mean_count(r: float, alpha: float, n: Optional[int] = None, k_max: int = 4000) -> float:
    """E[#points in the centered disk of radius r] = sum_k P(2k/alpha, r^alpha)."""
    count = k_max if n is None else int(n)
    return float(np.sum(reg_gamma_p(2.0 * np.arange(1, count + 1) / alpha, r ** alpha)))


# -- decay ----------------------------------------------------------------

def decay_fit_gram(region: Region, alpha: float, r_grid, corrected: bool = True,
                   quad: int = 16, return_data: bool = False):
    """Fit log P[X_n(rU) = 0] ~ slope * r^(2 alpha), n = ceil(2 r^alpha) per grid point."""
    r = np.asarray(r_grid, dtype=float)
    if r.size < 4:
        raise ValueError("decay_fit_gram needs at least 4 grid points")
    if np.any(np.diff(r) <= 0):
        raise ValueError("r_grid must be increasing")
    logs = []
    for rr in r:
        n = int(math.ceil(2 * rr ** alpha - 1e-9))
        logs.append(hole_prob_gram(GramSpec(n, alpha, region.scaled(rr), quad=quad)))
    logs = np.array(logs)
    if not np.all(np.isfinite(logs)):
        raise ArithmeticError("hole probability below working precision on the grid")
    slope = fit_decay_slope(r, logs, alpha, corrected=corrected)
    return (slope, logs) if return_data else slope
