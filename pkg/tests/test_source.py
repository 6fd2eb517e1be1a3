"""Extended source functionals: oracles, identities, and limits."""

import math

import numpy as np
import pytest

from conftest import random_poly_field
from cxpt.errors import (
    InsufficientSmoothnessError,
    InvalidIndexError,
    UnsupportedDimensionError,
    WindowTooSmallError,
)
from cxpt.fields import TestField, bump, constant, coordinate, gaussian, polynomial
from cxpt.geometry import ComplexPoint
from cxpt.source import (
    _AxialField,
    centroid,
    descent_check,
    lambda_coeff,
    moments,
    regularized_action,
    singular_action,
    singular_action_even,
    singular_action_odd,
    singular_action_r3,
    singular_action_r4,
)

# Frozen oracle: action of the n=3 source (a=1) on exp(-r^2).  The circle
# means are exact (the field is radial), leaving the single-layer integral
# e^{-1} (1 - Int_0^1 (e^{q^2}-1)/q^2 dq) with the integral summed as the
# series sum_m 1/(m! (2m-1)); thirty terms give full double precision.
GAUSSIAN_R3_ACTION = -0.07615901382553684


def gaussian_r3_series_oracle() -> float:
    s = sum(1.0 / (math.factorial(m) * (2 * m - 1)) for m in range(1, 30))
    return math.exp(-1.0) * (1.0 - s)


def test_frozen_oracle_matches_series():
    assert gaussian_r3_series_oracle() == pytest.approx(GAUSSIAN_R3_ACTION, abs=1e-15)


def test_lambda_coefficients():
    assert lambda_coeff(1, 0, 1.0) == pytest.approx(math.pi)
    assert lambda_coeff(2, 0, 1.0) == pytest.approx(2.0)
    assert lambda_coeff(3, 0, 1.0) == 0.0
    assert lambda_coeff(4, 2, 2.0) == pytest.approx(1.0)  # lambda_2 at a=2
    with pytest.raises(InvalidIndexError):
        lambda_coeff(2, 2, 1.0)
    with pytest.raises(InvalidIndexError):
        lambda_coeff(0, 0, 1.0)


def test_lambda_against_eps_integral_oracle():
    """lambda^m_k(0) is the eps->0 limit of int i^m q^m / (eps+iq)^k dq."""
    from cxpt.numerics import integrate_interval

    a = 1.0
    eps_list = [1.6e-2, 8e-3, 4e-3, 2e-3]

    def lam_eps(eps, m, k):
        def g(q):
            return (1j * q) ** m / (eps + 1j * q) ** k

        total = 0.0 + 0.0j
        # dyadic panels toward the eps-scale peak at q = 0
        edges = [0.0, eps]
        while edges[-1] < a:
            edges.append(min(a, 2 * edges[-1]))
        for lo, hi in zip(edges[:-1], edges[1:]):
            total += integrate_interval(g, lo, hi, order=24).value
            total += integrate_interval(g, -hi, -lo, order=24).value
        return total

    def neville_at_zero(eps_vals, vals):
        v = list(vals)
        for j in range(1, len(v)):
            for i in range(len(v) - 1, j - 1, -1):
                v[i] = v[i] + (v[i] - v[i - 1]) * eps_vals[i] / (
                    eps_vals[i - j] - eps_vals[i])
        return v[-1]

    for k in (1, 2, 3, 4):
        for m in range(k):
            vals = [lam_eps(e, m, k) for e in eps_list]
            extrap = neville_at_zero(eps_list, vals)
            assert extrap == pytest.approx(lambda_coeff(k, m, a), abs=5e-6)


def test_r3_examples():
    y = np.array([0.0, 0.0, 1.0])
    assert singular_action_r3(constant(1.0), y).value == pytest.approx(1.0, abs=1e-12)
    # dipole along the axis
    val = singular_action_r3(coordinate(2), y).value
    assert val == pytest.approx(-1j, abs=1e-10)
    # transverse coordinate is annihilated by the circle means
    assert abs(singular_action_r3(coordinate(0), y).value) <= 1e-12
    # Gaussian against the frozen series oracle
    act = singular_action_r3(gaussian(1.0), y)
    assert act.value == pytest.approx(GAUSSIAN_R3_ACTION, abs=1e-8)
    assert act.err_estimate <= 1e-8
    # parts sum exactly to the value
    assert act.value == act.parts["rim"] + act.parts["single_layer"] + act.parts["double_layer"]


def test_r3_dense_quadrature_oracle(rng):
    """Independent evaluation of L0, L1, L2 with a dense trapezoid/GL scheme."""
    y = np.array([0.0, 0.0, 1.0])
    a = 1.0
    f = gaussian(1.0, center=[0.3, -0.1, 0.2])

    def circle_mean(rho, zeta, m=4096):
        th = 2 * np.pi * np.arange(m) / m
        pts = np.stack([rho * np.cos(th), rho * np.sin(th), np.full(m, zeta)], axis=1)
        return complex(np.mean(f.evaluate(pts)))

    # q-parametrized integrals on a dense Gauss grid (10^4 nodes total)
    from cxpt.numerics import gauss_legendre

    leg = gauss_legendre(5000)
    qs = 0.5 * a * (leg.nodes + 1.0)
    wq = 0.5 * a * leg.weights
    l0 = circle_mean(a, 0.0)
    hz = 1e-5
    l1 = l2 = 0.0
    for q, w in zip(qs, wq):
        rho = math.sqrt(a**2 - q**2)
        l1 += w * (circle_mean(rho, 0.0) - l0) / q**2
        l2 += w * (circle_mean(rho, hz) - circle_mean(rho, -hz)) / (2 * hz)
    oracle = l0 - a * l1 - 1j * l2
    got = singular_action_r3(f, y).value
    assert got == pytest.approx(oracle, abs=1e-8)


def test_r3_point_source_when_y_zero():
    f = gaussian(1.0, center=[0.2, 0.0, 0.0])
    act = singular_action_r3(f, np.zeros(3))
    assert act.value == complex(f.evaluate(np.zeros(3)))
    assert act.parts["single_layer"] == 0.0


def test_r4_examples():
    y = np.array([0.0, 0.0, 0.0, 1.0])
    assert singular_action_r4(constant(1.0), y) == pytest.approx(1.0, abs=1e-12)
    assert singular_action_r4(coordinate(3), y) == pytest.approx(-1j, abs=1e-10)
    r2 = polynomial(4, {(2, 0, 0, 0): 1.0, (0, 2, 0, 0): 1.0,
                        (0, 0, 2, 0): 1.0, (0, 0, 0, 2): 1.0})
    assert singular_action_r4(r2, y) == pytest.approx(3.0, abs=1e-9)
    for a in (0.5, 2.0):
        assert singular_action_r4(r2, a * y) == pytest.approx(3 * a**2, rel=1e-9)


def test_even_formula_consistency(rng):
    y4 = np.array([0.0, 0.3, -0.2, 0.9])
    for _ in range(10):
        f = random_poly_field(rng, 4)
        a_val = singular_action_even(f, y4, 4)
        b_val = singular_action_r4(f, y4)
        assert a_val == pytest.approx(b_val, abs=1e-8)
    # n = 6 charge normalization
    y6 = np.zeros(6)
    y6[-1] = 1.0
    assert singular_action_even(constant(1.0), y6, 6) == pytest.approx(1.0, abs=1e-8)
    # odd parity in a transverse direction is annihilated
    odd_f = coordinate(0)
    assert abs(singular_action_even(odd_f, y6, 6)) <= 1e-10
    with pytest.raises(UnsupportedDimensionError):
        singular_action_even(constant(1.0), y6, 8)
    with pytest.raises(UnsupportedDimensionError):
        singular_action_even(constant(1.0), np.array([0, 0, 1.0]), 3)


def test_odd_formula_consistency(rng):
    y3 = np.array([0.1, 0.4, 0.8])
    for _ in range(10):
        f = random_poly_field(rng, 3)
        a_val = singular_action_odd(f, y3, 3)
        b_val = singular_action_r3(f, y3).value
        assert a_val == pytest.approx(b_val, abs=1e-8)
    y5 = np.zeros(5)
    y5[-1] = 1.0
    assert singular_action_odd(constant(1.0), y5, 5) == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(UnsupportedDimensionError):
        singular_action_odd(constant(1.0), np.zeros(7), 7)


def test_odd_point_source_trend():
    f = gaussian(2.0)
    errs = []
    for a in (0.5, 0.25, 0.125):
        y = np.array([0.0, 0.0, a])
        errs.append(abs(singular_action_odd(f, y, 3) - 1.0))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 0.5 * 0.125  # error <= C a with modest C


def test_moments_and_rotation_covariance():
    q_val, p_vec = moments(3, [0.0, 1.0, 0.0])
    assert q_val == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(p_vec, [0.0, -1j, 0.0], atol=1e-9)
    q4, p4 = moments(4, [0.0, 0.0, 0.0, 1.0])
    assert q4 == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(p4, [0, 0, 0, -1j], atol=1e-9)


def test_moment_identities_across_scales(rng):
    for n in (3, 4, 5, 6):
        direction = rng.normal(size=n)
        direction /= np.linalg.norm(direction)
        for a in (0.5, 1.0, 2.0):
            y = a * direction
            q_val, p_vec = moments(n, y)
            assert abs(q_val - 1.0) <= 1e-6
            assert np.max(np.abs(p_vec + 1j * y)) <= 1e-6


def test_centroid():
    z0 = ComplexPoint([0.0, 0.0, 0.0], [0.0, 0.0, 1.0])
    assert np.allclose(centroid(z0), [0, 0, 1j], atol=1e-9)
    z_real = ComplexPoint([0.4, -0.2, 0.7], [0.0, 0.0, 0.0])
    assert np.allclose(centroid(z_real), z_real.x, atol=1e-12)
    z1 = ComplexPoint([1.0, 2.0, 0.0], [0.0, 0.0, 1.0])
    assert np.allclose(centroid(z1), np.array([1.0, 2.0, 0.0]) + 1j * np.array([0, 0, 1.0]),
                       atol=1e-6)


def test_linearity(rng):
    y = np.array([0.2, -0.4, 0.9])
    f = gaussian(1.3)
    g = polynomial(3, {(1, 0, 0): 0.3, (0, 0, 2): 1.0})
    alpha, beta = 1.7 - 0.4j, -0.6 + 1.1j
    for n, yy in ((3, y), (4, np.append(y, 0.3))):
        fn = gaussian(1.3) if n == 3 else gaussian(1.3, center=np.zeros(n))
        gn = random_poly_field(rng, n, degree=2)
        lhs = singular_action(fn.scaled(alpha) + gn.scaled(beta), yy, n)
        rhs = alpha * singular_action(fn, yy, n) + beta * singular_action(gn, yy, n)
        assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, abs(rhs)))


def test_regularized_examples_and_convergence():
    y = np.array([0.0, 0.0, 1.0])
    # constant field: I_eps = 1 for every eps (exact cancellation)
    assert regularized_action(constant(1.0), y, 3, 1e-3) == pytest.approx(1.0, abs=2e-3)
    g = gaussian(1.0)
    target = singular_action_r3(g, y).value
    errs = [abs(regularized_action(g, y, 3, eps) - target) for eps in (1e-1, 1e-2, 1e-3)]
    assert errs[0] > errs[1] > errs[2]
    y4 = np.array([0.0, 0.0, 0.0, 1.0])
    target4 = singular_action_r4(g, y4)
    errs4 = [abs(regularized_action(g, y4, 4, eps) - target4) for eps in (1e-1, 1e-2, 1e-3)]
    assert errs4[0] > errs4[1] > errs4[2]


def test_regularized_small_a_limit():
    """a -> 0 at fixed eps: I_eps -> fbar#(eps) + eps fbar#_p(eps) / (n-2)."""
    eps = 0.05
    f = gaussian(1.0, center=[0.1, 0.0, 0.0])
    for a in (1e-2, 5e-3):
        y = np.array([0.0, 0.0, a])
        af = _AxialField(f, y, 3)
        limit = af.mean_pq(eps, 0.0) + eps * af.mean_pq_dp(eps, 0.0)
        val = regularized_action(f, y, 3, eps)
        assert abs(val - limit) <= 5.0 * a


def test_regularized_smoothness_guard():
    rough = TestField(lambda pts: np.ones(pts.shape[0]), smoothness=0)
    with pytest.raises(InsufficientSmoothnessError):
        regularized_action(rough, np.array([0, 0, 1.0]), 3, 1e-2)


def test_parity_of_parametrized_halves():
    """The two q-half evaluations of the V-integrand agree (even symmetry)."""
    f = gaussian(1.0, center=[0.3, 0.2, -0.1])
    y = np.array([0.0, 0.0, 1.0])
    af = _AxialField(f, y, 3)
    a = 1.0
    for q in (0.2, 0.5, 0.8):
        # F#(iq) evaluated through the two disk sides
        plus = af.Fhat(a**2 - q**2)
        minus = af.Fhat(a**2 - (-q) ** 2)
        assert plus == pytest.approx(minus, abs=1e-10)
        # the half-integrals of the single layer
        rho = math.sqrt(a**2 - q**2)
        g_plus = af.mean(rho, 0.0)
        g_minus = af.mean(-rho, 0.0)
        assert g_plus == pytest.approx(g_minus, abs=1e-12)


def test_support_confined_to_disk():
    """Perturbing the field outside r = a + margin leaves the action unchanged."""
    y = np.array([0.0, 0.0, 1.0])
    base = gaussian(1.0)
    far = bump(0.3, center=[0.0, 1.8, 0.0])  # support disjoint from r <= a + 10h
    v1 = singular_action_r3(base, y).value
    v2 = singular_action_r3(base + far, y).value
    assert abs(v1 - v2) <= 1e-12


def test_descent_identity():
    y = np.array([0.2, -0.3, 0.9])
    for f in (constant(1.0), gaussian(1.5)):
        lhs, rhs = descent_check(f, y)
        assert abs(lhs - rhs) <= 1e-6
    yhat = y / np.linalg.norm(y)
    f_axis = polynomial(3, {(1, 0, 0): yhat[0], (0, 1, 0): yhat[1], (0, 0, 1): yhat[2]})
    lhs, rhs = descent_check(f_axis, y)
    assert lhs == pytest.approx(-1j * np.linalg.norm(y), abs=1e-9)
    assert abs(lhs - rhs) <= 1e-6


def test_descent_window_guard():
    with pytest.raises(WindowTooSmallError):
        descent_check(constant(1.0), np.array([0, 0, 1.0]), window=0.5)


def test_descent_chain_higher_dimensions():
    """The descent identity also couples (4 <-> 5) and (5 <-> 6), giving a
    dual route through the general odd/even formulas."""
    y4 = np.array([0.1, -0.2, 0.3, 0.9])
    f4 = gaussian(1.5, center=[0.1, 0.0, 0.0, 0.2])
    lifted5 = TestField(lambda pts: f4.evaluate(pts[:, :4]))
    lhs4 = singular_action_r4(f4, y4)
    rhs5 = singular_action_odd(lifted5, np.append(y4, 0.0), 5)
    assert abs(lhs4 - rhs5) <= 1e-6

    y5 = np.array([0.0, 0.1, -0.2, 0.3, 0.8])
    f5 = gaussian(1.5, center=[0.1, 0.0, 0.0, 0.0, 0.2])
    lifted6 = TestField(lambda pts: f5.evaluate(pts[:, :5]))
    lhs5 = singular_action_odd(f5, y5, 5)
    rhs6 = singular_action_even(lifted6, np.append(y5, 0.0), 6)
    assert abs(lhs5 - rhs6) <= 1e-5


def test_regularized_convergence_n5():
    y5 = np.zeros(5)
    y5[-1] = 1.0
    g5 = gaussian(1.5)
    target = singular_action_odd(g5, y5, 5)
    errs = [abs(regularized_action(g5, y5, 5, eps) - target) for eps in (1e-1, 1e-2, 1e-3)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 5e-3


def test_action_smoothness_guards():
    rough = TestField(lambda pts: np.ones(pts.shape[0]), smoothness=0)
    y = np.array([0.0, 0.0, 1.0])
    with pytest.raises(InsufficientSmoothnessError):
        singular_action_r3(rough, y)
    with pytest.raises(InsufficientSmoothnessError):
        singular_action_odd(rough, np.zeros(5) + np.array([0, 0, 0, 0, 1.0]), 5)
