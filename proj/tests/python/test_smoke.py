"""End-to-end checks of the compiled module against frozen closed forms.

The numeric expectations below are the worked example pinned in the C++ unit
suite (mu = L = M = 1, d = 10, q = 2): any drift in the closed-form layer
shows up here as an exact mismatch, not a tolerance failure.
"""

import math

import numpy as np
import pytest

import hdsgd


def test_norm_exponent_table():
    assert hdsgd.choose_s_d(2) == 2
    assert hdsgd.choose_s_d(10) == 4
    assert hdsgd.choose_s_d(1000) == 8
    with pytest.raises(ValueError):
        hdsgd.choose_s_d(0)


def test_rate_closed_forms():
    assert hdsgd.alpha_max(1.0, 1.0, 4, 2.0) == pytest.approx(0.5, abs=0)
    assert hdsgd.contraction_rate(1.0, 1.0, 4, 2.0, 0.05) == pytest.approx(
        0.91, rel=1e-15
    )
    assert hdsgd.norm_contraction_rate(1.0, 1.0, 4, 2.0, 0.05) == pytest.approx(
        math.sqrt(0.91), rel=1e-15
    )
    assert hdsgd.tilde_contraction_rate(1.0, 1.0, 4, 2.0, 0.05) == pytest.approx(
        0.9525, rel=1e-15
    )
    # q = 2 root: 2 mu / ((|2-s| + (s-1)) L^2)
    assert hdsgd.alpha_root(1.0, 1.0, 4, 2.0) == pytest.approx(0.4, rel=1e-10)


def test_complexity_recipe_frozen_example():
    rec = hdsgd.complexity(0.1, 1.0, 1.0, 1.0, 10, 2.0, 1.0)
    assert rec.s_d == 4
    assert rec.V == pytest.approx(3.0, rel=1e-15)
    assert rec.B == pytest.approx(40.0, rel=1e-15)
    assert rec.alpha_rec == pytest.approx(1.0 / 1200.0, rel=1e-12)
    assert rec.k_rec == pytest.approx(36000.0, rel=1e-12)
    assert rec.up_to_constants


def test_norms_and_sandwich():
    v = np.array([3.0, -4.0])
    assert hdsgd.max_norm(v) == 4.0
    assert hdsgd.ls_norm(v, 2) == pytest.approx(5.0, rel=1e-15)
    assert hdsgd.lp_norm(v, 2.0) == pytest.approx(5.0, rel=1e-15)
    rng = np.random.default_rng(7)
    for d in (3, 17, 256):
        x = rng.standard_normal(d)
        s = hdsgd.choose_s_d(d)
        lo, mid, hi = hdsgd.max_norm(x), hdsgd.ls_norm(x, s), math.e * hdsgd.max_norm(x)
        assert lo <= mid * (1 + 1e-12)
        assert mid <= hi * (1 + 1e-12)


def test_averaged_bound_terms_sum():
    t = hdsgd.asgd_bound_terms(1.0, 1.0, 1.0, 10, 2.0, 4, 0.01, 1000.0, 1.0)
    assert t.total == pytest.approx(
        t.variance_term + t.init_term + t.bias_term, rel=1e-15
    )
    # bias term: M^2 max{q,s} alpha d^((q/(q-1))(1 - 2/s)) = 4 * 0.01 * 10
    assert t.bias_term == pytest.approx(0.4, rel=1e-12)
    assert t.variance_term > 0 and t.init_term > 0


def test_tail_bound_monotone_in_z():
    zs = [0.5, 1.0, 2.0, 4.0]
    vals = [
        hdsgd.fuk_nagaev_bound(z, 1000.0, 0.01, 16, 2.0, 1.0, 1.0, 1.0)
        for z in zs
    ]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert hdsgd.high_prob_radius(0.05, 1000.0, 0.01, 16, 2.0, 1.0, 1.0) > 0


def test_problem_constants():
    sigma = np.eye(2)
    reg = hdsgd.LinearRegression(sigma, np.zeros(2))
    assert reg.dim() == 2
    assert reg.name() == "regression"
    mu = reg.analytic_mu()
    assert mu.value == 1.0
    assert mu.provenance == hdsgd.Provenance.gershgorin
    assert np.allclose(reg.covariance(), sigma)

    tanh = hdsgd.TanhProblem(4, 0.5)
    assert tanh.name() == "tanh"
    assert tanh.analytic_mu().value == 1.0
    L = tanh.estimate_L(2, 2.0, 100, 5)
    assert L.value == 1.5  # exact coordinate slope bound 1 + rho
    assert L.provenance == hdsgd.Provenance.analytic
    M1 = tanh.estimate_M(2, 2.0, 500, 5)
    M2 = tanh.estimate_M(2, 2.0, 500, 5)
    assert M1.value == M2.value and M1.se == M2.se  # counter RNG: same seed, same draw


def test_estimate_constants_bundle():
    p = hdsgd.TanhProblem(3, 0.5)
    c = hdsgd.estimate_constants(p, 2, 2.0, 500, 11)
    assert c.s == 2 and c.q == 2.0
    assert c.mu.value == 1.0 and c.L.value == 1.5
    assert c.alpha_max == pytest.approx(
        hdsgd.alpha_max(c.mu.value, c.L.value, c.s, c.q), rel=1e-14
    )


def test_chain_determinism_and_contraction():
    p = hdsgd.TanhProblem(3, 0.5)
    beta0 = np.ones(3)
    a = hdsgd.run_chain(p, 0.05, beta0, 400, 42, [100, 400])
    b = hdsgd.run_chain(p, 0.05, beta0, 400, 42, [100, 400])
    assert list(a.ks) == [100, 400]
    assert np.array_equal(a.beta[1], b.beta[1])
    assert np.array_equal(a.mean[0], b.mean[0])
    # beta* = 0 for the unshifted field; 400 steps at alpha=0.05 forget beta0
    assert hdsgd.ls_norm(a.beta[1], 2) < hdsgd.ls_norm(beta0, 2)

    run = hdsgd.run_coupled_pair(p, 0.1, np.ones(3), -np.ones(3), 400, 9, 2, [400])
    assert len(run.iterate_distance) == 401
    assert run.iterate_distance[-1] < 1e-6 * run.iterate_distance[0]
    assert run.mean_gap[0] < run.iterate_distance[0]

    init = hdsgd.default_init(p, 3)
    assert hdsgd.max_norm(init - p.beta_star()) <= 1.0


def test_property_sweeps():
    r = hdsgd.sweep_taylor_remainder(2000, 7)
    assert r.ok and r.trials == 2000 and r.violations == 0
    n = hdsgd.sweep_norm_equivalence(500, [2, 10], 3)
    assert n.ok
    x = np.array([1.0, -0.3, 0.2])
    z = np.array([0.5, 0.1, -0.7])
    assert hdsgd.check_taylor_remainder(x, z, 0.05, 4, 2.0)
