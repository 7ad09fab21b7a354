import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.integrate import quad

from trigzeros.coefficients import SeedSpec, sample_pairs
from trigzeros.errors import InvalidArgumentError
from trigzeros.rtp import (C1Path, PathPL, TrigPolynomial, build_partial_sum, deriv_sup_bound,
                           holder_seminorm, lip11_battery, theta, theta_m)

finite = st.floats(-10, 10, allow_nan=False)
coeff_arrays = st.integers(1, 40).flatmap(lambda m: arrays(np.float64, (m, 2), elements=finite))


def test_constant_cosine_term():
    m = 9
    c = np.zeros((m, 2))
    c[0, 0] = math.sqrt(m)
    t = np.linspace(0, 1, 11)
    assert np.allclose(TrigPolynomial(c).eval(t), 1.0, atol=1e-15)


def test_m1_is_x0():
    p = TrigPolynomial([[0.7, -4.0]])
    assert np.allclose(p.eval(np.linspace(0, 1, 5)), 0.7)


def test_single_sine_term():
    p = TrigPolynomial([[0.0, 0.0], [0.0, math.sqrt(2.0)]])
    assert p.eval(1.0, 0) == pytest.approx(1.0, abs=1e-15)
    assert p.eval(1.0, 1) == pytest.approx(0.0, abs=1e-15)
    assert deriv_sup_bound(p, 1) == pytest.approx(math.pi / 2)
    t = np.linspace(0, 1, 1001)
    assert np.max(np.abs(p.eval(t, 1))) == pytest.approx(math.pi / 2, rel=1e-12)


def test_eval_matches_direct_sum(rng):
    c = rng.standard_normal((13, 2))
    t = rng.random(20)
    r = np.arange(13)
    w = math.pi * r / 13
    direct = (np.cos(np.outer(t, w)) @ c[:, 0] + np.sin(np.outer(t, w)) @ c[:, 1]) / math.sqrt(13)
    d1 = (-np.sin(np.outer(t, w)) @ (w * c[:, 0]) + np.cos(np.outer(t, w)) @ (w * c[:, 1])) / math.sqrt(13)
    d2 = -(np.cos(np.outer(t, w)) @ (w**2 * c[:, 0]) + np.sin(np.outer(t, w)) @ (w**2 * c[:, 1])) / math.sqrt(13)
    p = TrigPolynomial(c)
    assert np.allclose(p.eval(t, 0), direct, atol=1e-13)
    assert np.allclose(p.eval(t, 1), d1, atol=1e-12)
    assert np.allclose(p.eval(t, 2), d2, atol=1e-11)


@pytest.mark.parametrize("t", [-0.1, 1.0000001, np.nan])
def test_eval_rejects_outside(t):
    with pytest.raises(InvalidArgumentError):
        TrigPolynomial([[1.0, 0.0]]).eval(t)


def test_sup_bound_trivial_cases():
    assert deriv_sup_bound(TrigPolynomial(np.zeros((5, 2))), 1) == 0.0
    assert deriv_sup_bound(TrigPolynomial([[3.0, 2.0]]), 1) == 0.0
    assert deriv_sup_bound(TrigPolynomial([[3.0, 2.0]]), 2) == 0.0


def test_sup_bound_dominates(rng):
    for _ in range(1000):
        m = int(rng.integers(1, 60))
        p = TrigPolynomial(rng.standard_normal((m, 2)))
        t = rng.random(1000)
        for k in (1, 2):
            assert np.all(np.abs(p.eval(t, k)) <= p.deriv_sup_bound(k) * (1 + 1e-12) + 1e-15)


def test_unit_variance_statistically():
    n, m = 20000, 16
    vals = np.array([TrigPolynomial(sample_pairs("rademacher", m, SeedSpec(1, j))).eval(0.37)
                     for j in range(n)])
    assert abs(vals.var() - 1.0) < 4 * math.sqrt(2 / n)


def test_partial_sum_examples():
    p = build_partial_sum([[1.0, 0.0]])
    assert np.array_equal(p.times, [0, 1]) and np.array_equal(p.values, [0, 1])
    p = build_partial_sum([[1.0, 0.0], [-1.0, 0.0]])
    assert np.allclose(p.times, [0, 0.5, 1])
    assert np.allclose(p.values, [0, 1 / math.sqrt(2), 0])


@given(c=coeff_arrays)
def test_partial_sum_endpoint(c):
    p = build_partial_sum(c)
    m = c.shape[0]
    assert p.values[0] == 0
    assert abs(p.values[-1] - (c[:, 0].sum() + 1j * c[:, 1].sum()) / math.sqrt(m)) <= 1e-12 * (1 + np.abs(c).sum())
    assert np.allclose(np.diff(p.values), (c[:, 0] + 1j * c[:, 1]) / math.sqrt(m))


def test_partial_sum_rejects_empty():
    with pytest.raises(InvalidArgumentError):
        build_partial_sum(np.zeros((0, 2)))


def test_pathpl_validation():
    with pytest.raises(InvalidArgumentError):
        PathPL([0.1, 1.0], [0, 1])
    with pytest.raises(InvalidArgumentError):
        PathPL([0.0, 0.5, 0.5, 1.0], [0, 1, 2, 3])


@given(c=coeff_arrays, ts=arrays(np.float64, 100, elements=st.floats(0, 1)))
def test_identity_exact(c, ts):
    m = c.shape[0]
    err = np.abs(theta_m(build_partial_sum(c), m, ts) - TrigPolynomial(c).eval(ts))
    assert np.all(err <= 1e-10 * (1 + np.abs(c).sum() / math.sqrt(m)))


@given(z=st.complex_numbers(max_magnitude=1e3, allow_nan=False), m=st.integers(1, 200))
def test_constants_annihilated(z, m):
    t = np.linspace(0, 1, 33)
    const = PathPL([0.0, 1.0], [z, z])
    assert np.max(np.abs(theta(const, t))) <= 1e-12 * max(1.0, abs(z))
    f = lambda u: np.full(np.shape(u), z)  # noqa: E731
    assert np.max(np.abs(theta_m(f, m, t))) <= 1e-12 * max(1.0, abs(z))
    assert np.max(np.abs(theta(f, t))) <= 1e-12 * max(1.0, abs(z))


def test_theta_at_zero(rng):
    p = PathPL(np.linspace(0, 1, 9), rng.standard_normal(9) + 1j * rng.standard_normal(9))
    expect = (p.values[-1] - p.values[0]).real
    assert theta(p, 0.0) == pytest.approx(expect, abs=1e-14)
    assert theta_m(p, 8, 0.0) == pytest.approx(expect, abs=1e-14)


def _theta_oracle(f, t, points=None):
    kw = dict(epsabs=1e-13, limit=200, points=points)
    re = quad(lambda u: (np.exp(-1j * math.pi * t * u) * f(u)).real, 0, 1, **kw)[0]
    im = quad(lambda u: (np.exp(-1j * math.pi * t * u) * f(u)).imag, 0, 1, **kw)[0]
    return (np.exp(-1j * math.pi * t) * f(1.0) - f(0.0) + 1j * math.pi * t * (re + 1j * im)).real


@pytest.mark.parametrize("t", [0.0, 0.3, 0.77, 1.0])
def test_theta_linear_path_vs_quadrature(t):
    lin = PathPL([0.0, 1.0], [0.0, 1.0])
    assert theta(lin, t) == pytest.approx(_theta_oracle(lambda u: u, t), abs=1e-10)


def test_theta_pl_vs_quadrature(rng):
    knots = np.concatenate(([0.0], np.sort(rng.random(6)), [1.0]))
    p = PathPL(knots, rng.standard_normal(8) + 1j * rng.standard_normal(8))
    for t in (0.1, 0.5, 0.9):
        assert theta(p, t) == pytest.approx(_theta_oracle(lambda u: complex(p(u)), t, knots[1:-1]), abs=1e-9)


def test_theta_smooth_quadrature():
    f = lambda u: u + 1j * np.asarray(u) ** 2  # noqa: E731
    for t in (0.2, 1.0):
        assert theta(f, t, quad_n=64) == pytest.approx(_theta_oracle(f, t), abs=1e-10)


def test_theta_m_knot_mismatch():
    with pytest.raises(InvalidArgumentError):
        theta_m(PathPL([0.0, 0.3, 1.0], [0, 1, 2]), 2, 0.5)


@given(a=finite, b=finite, seed=st.integers(0, 1000))
def test_theta_m_linear(a, b, seed):
    r = np.random.default_rng(seed)
    knots = np.linspace(0, 1, 17)
    f = PathPL(knots, r.standard_normal(17) + 1j * r.standard_normal(17))
    g = PathPL(knots, r.standard_normal(17) + 1j * r.standard_normal(17))
    t = r.random(10)
    lhs = theta_m(a * f + b * g, 16, t)
    rhs = a * theta_m(f, 16, t) + b * theta_m(g, 16, t)
    assert np.allclose(lhs, rhs, atol=1e-12 * (1 + abs(a) + abs(b)) * 10)


# |a_{m-1} f(1) - f(0)| <= 2 sup|f| and sum |a_k - a_{k-1}| <= pi; observed ratios stay near 2.6
BOUND_C = 2.0 + math.pi


def test_theta_m_bounded(rng):
    t = np.linspace(0, 1, 257)
    for m in (2, 4, 8, 16, 32, 64, 128, 256, 512):
        for _ in range(20):
            f = PathPL(np.arange(m + 1) / m, rng.standard_normal(m + 1) + 1j * rng.standard_normal(m + 1))
            assert np.max(np.abs(theta_m(f, m, t))) <= BOUND_C * np.max(np.abs(f.values))


def test_theta_m_converges_smooth():
    t = np.linspace(0, 1, 1024)
    f = lambda u: u + 1j * np.asarray(u) ** 2  # noqa: E731
    ref = theta(f, t, quad_n=256)
    d = [np.max(np.abs(theta_m(f, m, t) - ref)) for m in (8, 16, 32, 64, 128, 256)]
    assert all(b <= 1.1 * a for a, b in zip(d, d[1:]))
    assert d[-1] < d[0] / 4


def test_holder_examples():
    assert holder_seminorm(PathPL([0.0, 1.0], [3.0, 3.0]), 0.5) == 0.0
    assert holder_seminorm(PathPL([0.0, 1.0], [0.0, 1.0]), 0.5) == pytest.approx(1.0)
    assert holder_seminorm(PathPL([0.0, 0.25, 1.0], [0.0, 0.25, 1.0]), 0.5) == pytest.approx(1.0)
    with pytest.raises(InvalidArgumentError):
        holder_seminorm(PathPL([0.0, 1.0], [0.0, 1.0]), 1.0)
    with pytest.raises(InvalidArgumentError):
        holder_seminorm(C1Path([0.5], [1.0], [0.0]), 0.5)


def test_holder_brute_force(rng):
    g = np.concatenate(([0.0], np.sort(rng.random(30)), [1.0]))
    v = rng.standard_normal(32)
    c = C1Path(g, v, np.zeros(32))
    brute = max(abs(v[i] - v[j]) / abs(g[i] - g[j]) ** 0.3 for i in range(32) for j in range(i))
    assert holder_seminorm(c, 0.3) == pytest.approx(brute)


def test_lip11_battery_examples():
    g = np.linspace(0, 1, 101)
    assert np.array_equal(lip11_battery(C1Path(g, np.zeros(101), np.zeros(101))), np.zeros(4))
    const = lip11_battery(C1Path(g, np.full(101, 2.0), np.zeros(101)))
    assert const[0] == 2.0 and const[2] == 1.0
    lin = lip11_battery(C1Path.from_function(lambda u: u, np.ones_like))
    assert np.allclose(lin, [0.5, 0.5, 1.0, 0.25])


def test_lip11_property(rng):
    # F1, F2 satisfy |F(x+h) - F(x)| <= (|x| + |h|) |h| in their respective norms
    g = np.linspace(0, 1, 257)
    for _ in range(200):
        a, b = rng.standard_normal((2, 4))
        x = C1Path(g, np.polyval(a, g), np.polyval(np.polyder(a), g))
        h = C1Path(g, np.polyval(b, g), np.polyval(np.polyder(b), g))
        xh = C1Path(g, x.values + h.values, x.derivs + h.derivs)
        fx, fh, fxh = lip11_battery(x), lip11_battery(h), lip11_battery(xh)
        nx, nh = np.sqrt(2 * fx[:2]), np.sqrt(2 * fh[:2])
        assert np.all(np.abs(fxh[:2] - fx[:2]) <= (nx + nh) * nh + 1e-12)
        assert abs(fxh[2] - fx[2]) <= nh[0] + 1e-12


def test_c1path_from_polynomial_interpolates(rng):
    p = TrigPolynomial(rng.standard_normal((6, 2)))
    c = C1Path.from_polynomial(p, 64)
    u = rng.random(50)
    assert np.allclose(c(u), p.eval(u), atol=1e-7)
