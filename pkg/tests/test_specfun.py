import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from holeprob.specfun import (
    Accuracy,
    NonConvergenceError,
    log_gamma,
    log_reg_gamma_p,
    log_reg_gamma_q,
    mittag_leffler,
    reg_gamma_p,
    reg_gamma_q,
)


def test_log_gamma_matches_factorials():
    for k in range(1, 30):
        assert log_gamma(k + 1) == pytest.approx(math.log(math.factorial(k)), rel=1e-14)
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)


def test_log_gamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        log_gamma(0.0)
    with pytest.raises(ValueError):
        log_gamma(np.array([1.0, -2.0]))


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-3, 500.0), st.floats(0.0, 800.0))
def test_incomplete_gamma_against_scipy(s, x):
    assert reg_gamma_p(s, x) == pytest.approx(special.gammainc(s, x), abs=2e-14)
    assert reg_gamma_q(s, x) == pytest.approx(special.gammaincc(s, x), abs=2e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-2, 200.0), st.floats(1e-3, 400.0))
def test_p_plus_q_is_one(s, x):
    assert reg_gamma_p(s, x) + reg_gamma_q(s, x) == pytest.approx(1.0, abs=1e-14)


def test_integer_shape_is_poisson_tail():
    # Q(k, x) = P[Poisson(x) < k]
    for k in (1, 2, 5, 12):
        for x in (0.3, 1.0, 4.0, 15.0):
            expect = sum(math.exp(-x) * x ** j / math.factorial(j) for j in range(k))
            assert reg_gamma_q(k, x) == pytest.approx(expect, rel=1e-13)


def test_log_space_survives_underflow():
    # Q(1, x) = e^{-x}; plain double underflows at x = 800
    assert log_reg_gamma_q(1.0, 800.0) == pytest.approx(-800.0, rel=1e-15)
    lp = log_reg_gamma_p(400.0, 1.0)
    ref = float(mpmath.log(mpmath.gammainc(400, 0, 1, regularized=True)))
    assert lp == pytest.approx(ref, rel=1e-12)


def test_large_shape_log_q_matches_mpmath():
    for s, x in [(50.0, 120.0), (1000.0, 1300.0), (3000.0, 2500.0)]:
        ref = float(mpmath.log(mpmath.gammainc(s, x, mpmath.inf, regularized=True)))
        assert log_reg_gamma_q(s, x) == pytest.approx(ref, rel=1e-11)


def test_boundary_x_zero():
    assert reg_gamma_p(3.0, 0.0) == 0.0
    assert reg_gamma_q(3.0, 0.0) == 1.0


def test_vectorized_shapes():
    s = np.array([[1.0, 2.0], [3.0, 4.0]])
    out = reg_gamma_q(s, 2.0)
    assert out.shape == (2, 2)
    np.testing.assert_allclose(out, special.gammaincc(s, 2.0), atol=1e-15)


def test_bad_arguments():
    with pytest.raises(ValueError):
        reg_gamma_p(0.0, 1.0)
    with pytest.raises(ValueError):
        reg_gamma_q(1.0, -1.0)
    with pytest.raises(ValueError):
        Accuracy(abs_tol=0)


def test_mittag_leffler_closed_forms():
    assert mittag_leffler(1, 1, 1.0) == pytest.approx(math.e, rel=1e-15)
    assert mittag_leffler(1, 2, 1.0) == pytest.approx(math.e - 1, rel=1e-15)
    assert mittag_leffler(2, 2, 1.0) == pytest.approx(math.sinh(1.0), rel=1e-15)
    assert mittag_leffler(2, 1, 4.0) == pytest.approx(math.cosh(2.0), rel=1e-14)
    # cancellation-heavy: absolute error is the meaningful bound here
    assert abs(mittag_leffler(1, 1, -10.0) - math.exp(-10.0)) < 1e-11


def _ml_mpmath(a, b, z, terms=400):
    mpmath.mp.dps = 40
    z = mpmath.mpc(z)
    return complex(mpmath.nsum(lambda k: z ** k / mpmath.gamma(a * k + b), [0, terms]))


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("z", [0.3 + 0.4j, -2.0 + 1.0j, 6.0])
def test_mittag_leffler_against_mpmath(a, z):
    got, bound = mittag_leffler(a, a, z, return_bound=True)
    ref = _ml_mpmath(a, a, z)
    # the series cancels for Re z < 0; rounding is relative to the largest term
    peak = max(math.exp(k * math.log(abs(z)) - math.lgamma(a * k + a)) for k in range(200))
    assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref), peak)
    assert bound <= 1e-15 * max(1.0, abs(ref)) * 1.0001


def test_mittag_leffler_guards():
    with pytest.raises(ValueError):
        mittag_leffler(1, 1, 2e3)
    with pytest.raises(NonConvergenceError):
        mittag_leffler(1, 1, 50.0, Accuracy(max_terms=5))
