import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_gegenbauer, roots_gegenbauer

from hyperalias.specfun import (
    GegenbauerSpec,
    gegenbauer_derivative,
    gegenbauer_eval,
    gegenbauer_zeros,
    log_gamma,
    norm_h,
)

alphas = st.floats(min_value=0.05, max_value=6.0)
ts = st.floats(min_value=-1.0, max_value=1.0)


@given(n=st.integers(0, 30), a=alphas, t=ts)
def test_eval_matches_scipy(n, a, t):
    ref = eval_gegenbauer(n, a, t)
    assert gegenbauer_eval(GegenbauerSpec(n, a), t) == pytest.approx(ref, rel=1e-9, abs=1e-9 * max(1.0, abs(eval_gegenbauer(n, a, 1.0))))


def test_eval_small_cases():
    assert gegenbauer_eval(0, 0.3, 1.0) == 1.0
    assert gegenbauer_eval(1, 0.5, 1.5) == pytest.approx(1.5)
    # C_2^1 = U_2 = 4t^2 - 1
    assert gegenbauer_eval(2, 0.5, 1.0) == pytest.approx(0.0, abs=1e-15)


@given(n=st.integers(0, 25), a=alphas, t=ts)
def test_parity(n, a, t):
    assert gegenbauer_eval(n, -t, a) == pytest.approx((-1) ** n * gegenbauer_eval(n, t, a), rel=1e-12, abs=1e-12)


def test_value_at_one():
    for n in range(10):
        for a in (0.5, 1.0, 2.5):
            expected = math.exp(math.lgamma(n + 2 * a) - math.lgamma(n + 1) - math.lgamma(2 * a))
            assert gegenbauer_eval(n, 1.0, a) == pytest.approx(expected, rel=1e-12)


def test_eval_vectorized():
    t = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(gegenbauer_eval(5, t, 1.25), eval_gegenbauer(5, 1.25, t), rtol=1e-12, atol=1e-12)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        GegenbauerSpec(-1, 1.0)
    with pytest.raises(ValueError):
        GegenbauerSpec(2, 0.0)
    with pytest.raises(ValueError):
        gegenbauer_eval(2, 1.5, 1.0)


def test_derivative_finite_difference():
    h = 1e-6
    for n, a, t in ((5, 1.5, 0.3), (8, 0.5, -0.7), (1, 2.0, 0.0)):
        fd = (gegenbauer_eval(n, t + h, a) - gegenbauer_eval(n, t - h, a)) / (2 * h)
        assert gegenbauer_derivative(n, t, a) == pytest.approx(fd, rel=1e-6, abs=1e-6)


@settings(max_examples=60)
@given(n=st.integers(1, 40), a=alphas)
def test_zeros(n, a):
    z = gegenbauer_zeros(GegenbauerSpec(n, a))
    assert len(z) == n
    assert np.all(np.diff(z) > 0)
    assert np.all(z == -z[::-1])
    ref = roots_gegenbauer(n, a)[0]
    np.testing.assert_allclose(z, np.sort(ref), atol=1e-12)


def test_zeros_odd_degree_has_center():
    assert gegenbauer_zeros(5, 1.0)[2] == 0.0


def test_zeros_require_degree():
    with pytest.raises(ValueError):
        gegenbauer_zeros(0, 1.0)


def test_log_gamma():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)
    assert log_gamma(171.5) == pytest.approx(math.lgamma(171.5))
    with pytest.raises(ValueError):
        log_gamma(0.0)


def test_norm_h_two_sphere():
    # on S^2 h_{ell,m;1} is the Legendre normalizer: sqrt((2l+1)/2 (l-m)!/(l+m)!) times (2m-1)!!
    for ell in range(6):
        for m in range(ell + 1):
            zeta = math.sqrt((2 * ell + 1) / 2 * math.factorial(ell - m) / math.factorial(ell + m))
            dfact = math.prod(range(1, 2 * m, 2)) if m else 1
            assert norm_h(ell, m, 1, 2) == pytest.approx(zeta * dfact, rel=1e-12)


def test_norm_h_normalizes():
    # h^2 * int C^2 (1-t^2)^(m+a-1/2) dt = 1 with a = (d-j)/2
    from scipy.integrate import quad

    for d, j, mp, m in ((3, 1, 4, 2), (4, 2, 3, 1), (5, 1, 2, 0)):
        a = (d - j) / 2
        integrand = lambda t: gegenbauer_eval(mp - m, t, m + a) ** 2 * (1 - t * t) ** (m + a - 0.5)
        val = quad(integrand, -1, 1)[0]
        assert norm_h(mp, m, j, d) ** 2 * val == pytest.approx(1.0, rel=1e-9)


def test_norm_h_rejects_bad_indices():
    with pytest.raises(ValueError):
        norm_h(1, 2, 1, 3)
    with pytest.raises(ValueError):
        norm_h(2, 1, 3, 3)
