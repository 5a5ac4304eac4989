import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from monopath.asymptotics import (
    ConvergenceError,
    adaptive_quad,
    critical_p,
    exp_integral_e1,
    exploration_drift,
    f_of_b,
    gumbel_cdf,
    gumbel_pdf,
    lambert_w,
    limit_prob,
    limit_prob_tanh,
    rest_term_target,
    solve_p_from_b,
)

from oracles import e1_quadrature, euler_gamma_quadrature

X_GRID = np.linspace(-10, 10, 41)

# frozen from e1_quadrature(1.0) (composite Simpson, 10^6 nodes)
E1_AT_ONE = 0.21938393439552029
GOMPERTZ = math.e * E1_AT_ONE


def test_e1_at_one():
    assert abs(e1_quadrature(1.0) - E1_AT_ONE) < 1e-15
    assert abs(exp_integral_e1(1.0) - E1_AT_ONE) < 1e-12


@pytest.mark.parametrize("z", [0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
def test_e1_matches_quadrature(z):
    assert abs(exp_integral_e1(z) - e1_quadrature(z)) < 1e-10


@pytest.mark.parametrize("z", [1e-8, 1e-3, 0.3, 0.999, 1.0, 1.001, 3.0, 30.0, 300.0, 699.0])
def test_e1_matches_scipy(z):
    assert abs(exp_integral_e1(z) - special.exp1(z)) <= 1e-12 * max(1.0, special.exp1(z))


def test_e1_small_argument_series():
    gamma = euler_gamma_quadrature()
    assert abs(exp_integral_e1(1e-6) + math.log(1e-6) + gamma) < 1e-5


@pytest.mark.parametrize("z", [10.0, 50.0])
def test_e1_upper_bound(z):
    assert exp_integral_e1(z) <= math.exp(-z) / z


def test_e1_underflow_and_domain():
    assert exp_integral_e1(800.0) == 0.0
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            exp_integral_e1(bad)


def test_limit_prob_at_zero():
    assert abs(limit_prob(0.0) - (1 - GOMPERTZ)) < 1e-12
    assert limit_prob(0.0) == pytest.approx(0.403652637, abs=1e-9)


def test_limit_prob_tails():
    assert abs(limit_prob(20.0) - 1.0) < 1e-6
    assert abs(limit_prob(-20.0)) < 1e-6
    assert limit_prob(1e4) == 1.0 and limit_prob(-1e4) == 0.0


def test_limit_prob_strictly_increasing():
    vals = [limit_prob(x) for x in X_GRID]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_limit_equals_one_minus_f():
    for x in X_GRID:
        assert abs(limit_prob(x) - (1 - f_of_b(math.exp(x)))) <= 1e-10


def test_tanh_form_matches_integral_form():
    for x in X_GRID:
        assert abs(limit_prob(x) - limit_prob_tanh(x, 1e-10)) <= 1e-8


def test_tanh_form_by_direct_quadrature():
    # the same expectation over the Gumbel density, integrated by scipy
    from scipy import integrate

    for x in (-3.0, 0.0, 3.0):
        f = lambda z: math.tanh((x - z) / 2) * gumbel_pdf(z)  # noqa: E731
        val, _ = integrate.quad(f, -30, 60, epsabs=1e-13, limit=500, points=[x])
        assert abs(0.5 + 0.5 * val - limit_prob_tanh(x, 1e-10)) < 1e-9


def test_tanh_integrand_zero_at_sign_change():
    x = 1.3
    t = math.exp(-x)
    assert math.tanh(0.5 * (x + math.log(t))) == pytest.approx(0.0, abs=1e-15)


def test_quadrature_failure_is_reported():
    with pytest.raises(ConvergenceError) as info:
        adaptive_quad(lambda t: np.sign(t - 0.3337) * 1.0, 0.0, 1.0, 1e-14, max_depth=5)
    assert info.value.achieved is not None


def test_f_of_b_values():
    assert f_of_b(1.0) == pytest.approx(GOMPERTZ, abs=1e-12)
    assert f_of_b(1e6) < 1e-4
    assert abs(f_of_b(1e-6) - 1) < 1e-4
    with pytest.raises(ValueError):
        f_of_b(0.0)


def test_critical_p_values():
    cs = critical_p(16, 0.0)
    assert math.log(math.log(16)) == pytest.approx(1.0197, abs=1e-4)
    assert cs.p == pytest.approx((math.log(16) - math.log(math.log(16))) / 16, rel=1e-15)
    # frozen: (log 1000 - log log 1000) / 1000
    assert critical_p(1000, 0.0).p == pytest.approx(0.004975110545066072, rel=1e-12)
    big = critical_p(10**8, 0.0)
    assert abs(big.b - 1) < 0.17
    ln = math.log(10**8)
    assert big.b == pytest.approx(1 + (0 - math.log(ln)) / ln, rel=1e-10)


def test_critical_sequence_invariant():
    for n in (10, 10**3, 10**6):
        for x in (-1.0, 0.0, 2.5):
            cs = critical_p(n, x)
            assert abs(math.log(cs.b / cs.p) / cs.p - n) <= 1e-10 * n


@pytest.mark.parametrize("n,x", [(2, 0.0), (100, -10.0), (10, 50.0)])
def test_critical_p_rejects(n, x):
    with pytest.raises(ValueError):
        critical_p(n, x)


def test_lambert_w_identity_points():
    assert lambert_w(math.e) == pytest.approx(1.0, abs=1e-15)
    assert lambert_w(0.0) == 0.0
    assert lambert_w(-1 / math.e) == pytest.approx(-1.0, abs=1e-7)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-0.3, max_value=1e300))
def test_lambert_w_matches_scipy(z):
    w = lambert_w(z)
    assert w == pytest.approx(special.lambertw(z).real, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("z", [-1 / math.e + 1e-9, -0.36, -0.33])
def test_lambert_w_near_branch_point(z):
    # W is ill-conditioned here; check the defining equation instead
    w = lambert_w(z)
    assert w >= -1.0
    assert abs(w * math.exp(w) - z) < 1e-15


def test_solve_p_examples():
    n = 1000
    assert solve_p_from_b(n, math.e / n) == pytest.approx(1.0 / n, rel=1e-14)
    p = solve_p_from_b(1000, 1.0)
    assert abs(1000 - math.log(1.0 / p) / p) < 1e-6


def test_solve_p_round_trip():
    p0 = critical_p(10**5, 0.0).p
    b0 = p0 * math.exp(10**5 * p0)
    assert abs(solve_p_from_b(10**5, b0) - p0) < 1e-12


@pytest.mark.parametrize("p", [1e-4, 1e-3, 1e-2])
@pytest.mark.parametrize("np_", [1.0, 5.0, 20.0])
def test_solve_p_inverse_consistency(p, np_):
    n = round(np_ / p)
    b = p * math.exp(n * p)
    assert abs(solve_p_from_b(n, b) - p) <= 1e-12 * p


def test_solve_p_rejects():
    with pytest.raises(ValueError):
        solve_p_from_b(10, 0.0)
    with pytest.raises(ValueError):
        solve_p_from_b(1, 100.0)  # W(100) > 1


def test_gumbel_cdf_values():
    assert gumbel_cdf(0.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert gumbel_cdf(50.0) == pytest.approx(1.0, abs=1e-15)
    assert gumbel_cdf(-50.0) == 0.0
    arr = gumbel_cdf(np.array([-1000.0, 0.0, 1000.0]))
    assert arr.tolist() == [0.0, math.exp(-1), 1.0]


@pytest.mark.parametrize("z", [-1.0, 0.0, 2.0])
def test_gumbel_density_finite_difference(z):
    h = 1e-5
    fd = (gumbel_cdf(z + h) - gumbel_cdf(z - h)) / (2 * h)
    assert abs(fd - math.exp(-(z + math.exp(-z)))) < 1e-6


def test_drift_targets():
    assert exploration_drift(1.0) == pytest.approx(0.5413248546129181, abs=1e-15)
    assert rest_term_target(1.0) == pytest.approx(math.log(math.e - 1), abs=1e-15)
    # log((e^a - 1)/a) ~ a/2 for small a
    assert rest_term_target(0.01) < 0.01
