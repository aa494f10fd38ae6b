"""Special functions: log-gamma, regularized incomplete gamma, Mittag-Leffler.

The incomplete gamma routines are vectorized over numpy arrays and come in
plain and log-space flavours; the log versions are what the hole probability
code uses, since the factors underflow long before the sums do.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Accuracy",
    "NonConvergenceError",
    "log_gamma",
    "reg_gamma_p",
    "reg_gamma_q",
    "log_reg_gamma_p",
    "log_reg_gamma_q",
    "mittag_leffler",
]

_EPS = np.finfo(float).eps
_TINY = 1e-300


class NonConvergenceError(ArithmeticError):
    """Raised when a series or continued fraction runs out of terms."""


@dataclass(frozen=True)
class Accuracy:
    abs_tol: float = 1e-15
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_ACCURACY = Accuracy()


def log_gamma(x):
    """ln Gamma(x) for x > 0 (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("log_gamma requires x > 0")
    if arr.ndim == 0:
        return math.lgamma(float(arr))
    return np.vectorize(math.lgamma, otypes=[float])(arr)


def _stirling_tail(s):
    # lgamma(s) - [(s - 1/2) ln s - s + ln(2 pi)/2], valid for s >= 10
    inv = 1.0 / s
    inv2 = inv * inv
    coeffs = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156)
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * inv2 + c
    return inv * acc


def _log_prefactor(s, x):
    """s ln x - x - lgamma(s), arranged to avoid cancellation for large s."""
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    s, x = np.broadcast_arrays(s, x)
    out = np.empty(s.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = s >= 10
        if np.any(big):
            sb, xb = s[big], x[big]
            t1 = xb / sb - 1.0
            # s ln(x/s) + s - x = -s (t - log1p(t)), t = x/s - 1
            core = -sb * (t1 - np.log1p(t1))
            out[big] = core + 0.5 * np.log(sb) - 0.5 * math.log(2 * math.pi) - _stirling_tail(sb)
        small = ~big
        if np.any(small):
            ss, xs = s[small], x[small]
            out[small] = ss * np.log(xs) - xs - log_gamma(ss)
    return out


def _check_args(s, x):
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(~(s > 0)):
        raise ValueError("incomplete gamma requires s > 0")
    if np.any(~(x >= 0)):
        raise ValueError("incomplete gamma requires x >= 0")
    return np.broadcast_arrays(s, x)


def _series_sum(s, x, acc):
    # sum_{n>=0} x^n / ((s+1)...(s+n)); P = exp(prefactor) * sum / s
    total = np.ones(s.shape)
    term = np.ones(s.shape)
    active = np.ones(s.shape, dtype=bool)
    for n in range(1, acc.max_terms + 1):
        term = np.where(active, term * x / (s + n), 0.0)
        total = total + term
        active &= term > total * _EPS * 0.5
        if not active.any():
            return total
    raise NonConvergenceError("incomplete gamma series did not converge")


def _cont_frac(s, x, acc):
    # modified Lentz for Q = exp(prefactor) * cf
    b = x + 1.0 - s
    c = np.full(s.shape, 1.0 / _TINY)
    d = 1.0 / np.where(np.abs(b) < _TINY, _TINY, b)
    h = d.copy()
    active = np.ones(s.shape, dtype=bool)
    for i in range(1, acc.max_terms + 1):
        an = -i * (i - s)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = b + an / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > _EPS
        if not active.any():
            return h
    raise NonConvergenceError("incomplete gamma continued fraction did not converge")


def _log_pq(s, x, acc):
    """Return (log P, log Q) arrays."""
    s, x = _check_args(s, x)
    shape = s.shape
    s = s.ravel().astype(float)
    x = x.ravel().astype(float)
    log_p = np.empty(s.shape)
    log_q = np.empty(s.shape)

    zero = x == 0
    log_p[zero] = -np.inf
    log_q[zero] = 0.0

    ser = (~zero) & (x < s + 1)
    if np.any(ser):
        ss, xs = s[ser], x[ser]
        lp = _log_prefactor(ss, xs) - np.log(ss) + np.log(_series_sum(ss, xs, acc))
        log_p[ser] = lp
        log_q[ser] = np.log1p(-np.exp(lp))

    cf = (~zero) & ~ser
    if np.any(cf):
        sc, xc = s[cf], x[cf]
        lq = _log_prefactor(sc, xc) + np.log(_cont_frac(sc, xc, acc))
        log_q[cf] = lq
        log_p[cf] = np.log1p(-np.exp(lq))
    return log_p.reshape(shape), log_q.reshape(shape)


def _scalarize(a):
    return float(a) if np.ndim(a) == 0 else a


def log_reg_gamma_p(s, x, acc: Accuracy = DEFAULT_ACCURACY):
    """log P(s, x), accurate even when P underflows."""
    return _scalarize(_log_pq(s, x, acc)[0])


def log_reg_gamma_q(s, x, acc: Accuracy = DEFAULT_ACCURACY):
    """log Q(s, x), accurate even when Q underflows."""
    return _scalarize(_log_pq(s, x, acc)[1])


def reg_gamma_p(s, x, acc: Accuracy = DEFAULT_ACCURACY):
    """Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s)."""
    return _scalarize(np.exp(_log_pq(s, x, acc)[0]))


def reg_gamma_q(s, x, acc: Accuracy = DEFAULT_ACCURACY):
    """Regularized upper incomplete gamma Q(s, x), the tail P[Gamma(s,1) > x]."""
    return _scalarize(np.exp(_log_pq(s, x, acc)[1]))


def mittag_leffler(a, b, z, acc: Accuracy = DEFAULT_ACCURACY, return_bound=False):
    """Two-parameter Mittag-Leffler function E_{a,b}(z) = sum z^k / Gamma(a k + b).

    Direct power series, intended for moderate |z|. The sum stops once the
    terms are decreasing and the geometric bound on the remainder drops
    below ``acc.abs_tol`` (relative to the running sum when it exceeds 1).
    With ``return_bound=True`` the remainder bound is returned as well.
    """
    if not (a > 0 and b > 0):
        raise ValueError("mittag_leffler requires a > 0 and b > 0")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1e3):
        raise ValueError("mittag_leffler series is limited to |z| <= 1e3")
    flat = z.ravel()
    absz = np.abs(flat)
    with np.errstate(divide="ignore"):
        log_abs = np.log(absz)
    phase = np.exp(1j * np.angle(flat))
    total = np.zeros(flat.shape, dtype=complex)
    bound = np.full(flat.shape, np.inf)
    active = np.ones(flat.shape, dtype=bool)
    prev = None
    for k in range(acc.max_terms):
        lg = math.lgamma(a * k + b)
        if k == 0:
            mag = np.full(flat.shape, math.exp(-lg))
        else:
            with np.errstate(under="ignore"):
                mag = np.where(absz > 0, np.exp(k * log_abs - lg), 0.0)
        total = np.where(active, total + mag * phase ** k, total)
        if prev is not None:
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(prev > 0, mag / prev, 0.0)
            # log-convexity of Gamma makes the ratio nonincreasing in k once it is below 1
            decreasing = ratio < 0.5
            with np.errstate(divide="ignore"):
                rem = np.where(decreasing, mag * ratio / (1 - ratio), np.inf)
            scale = np.maximum(1.0, np.abs(total))
            done = active & decreasing & (rem <= acc.abs_tol * scale)
            bound = np.where(done, rem, bound)
            active &= ~done
        prev = mag
        if not active.any():
            out = total.reshape(z.shape)
            if out.ndim == 0:
                out = complex(out)
            if return_bound:
                bnd = bound.reshape(z.shape)
                return out, (float(bnd) if bnd.ndim == 0 else bnd)
            return out
    raise NonConvergenceError("Mittag-Leffler series hit max_terms")
