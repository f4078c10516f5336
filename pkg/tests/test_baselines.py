"""Pitman-Yor baseline: prior reproduction, sigma updates, DP equivalence."""

import math

import numpy as np
import pytest
from scipy import stats

from bbsb import BBSBParams, GibbsConfig, NormalGammaBase, run_gibbs
from bbsb.baselines import (
    PitmanYorParams,
    _sigma_grid_logliks,
    default_sigma_grid,
    py_update_sigma,
    py_update_v_u,
    run_pitman_yor,
)
from bbsb.mixture import _stick_weights, MixtureState
from bbsb.sampling import beta_rv

BASE = NormalGammaBase(location=0.0, scale_factor=100.0, shape=0.5, rate=0.5)


def make_state(v, u, d):
    v = np.asarray(v, dtype=float)
    w, _ = _stick_weights(v)
    phi = v.shape[0]
    return MixtureState(means=np.zeros(phi), precisions=np.ones(phi), v=v,
                        w=w, u=np.asarray(u, dtype=float),
                        d=np.asarray(d, dtype=np.int64), kappa=0)


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            PitmanYorParams(sigma=1.0, theta=1.0)
        with pytest.raises(ValueError):
            PitmanYorParams(sigma=-0.1, theta=1.0)
        with pytest.raises(ValueError):
            PitmanYorParams(sigma=0.3, theta=-0.5)
        assert PitmanYorParams(sigma=0.7, theta=-0.5).sigma == 0.7


class TestLengthVariableUpdate:
    def test_zero_discount_is_the_dirichlet_update(self):
        params = PitmanYorParams(sigma=0.0, theta=2.0)
        d = np.array([0, 0, 1, 2, 2])
        state = make_state([0.5, 0.5, 0.5], np.full(5, 1e-4), d)
        rng = np.random.default_rng(0)
        py_update_v_u(state, params, BASE, rng)
        rng2 = np.random.default_rng(0)
        assigned = np.bincount(d, minlength=3)
        beyond = 5 - np.cumsum(assigned)
        expected = [float(beta_rv(rng2, 1.0 + assigned[i], 2.0 + beyond[i]))
                    for i in range(3)]
        np.testing.assert_allclose(state.v[:3], expected, rtol=1e-12)

    def test_prior_reproduction_with_no_data(self):
        params = PitmanYorParams(sigma=0.4, theta=1.0)
        rng = np.random.default_rng(1)
        state = make_state([0.3] * 6, np.empty(0), np.empty(0, dtype=int))
        third = []
        for _ in range(4000):
            py_update_v_u(state, params, BASE, rng)
            third.append(state.v[2])
        # stick 3 has prior Beta(1-sigma, theta+3*sigma)
        ks = stats.kstest(third, stats.beta(0.6, 2.2).cdf)
        assert ks.pvalue > 1e-3

    def test_symmetric_tilted_first_stick(self):
        # counts (3,2) with sigma=.5, theta=1 give v_1 ~ Beta(3.5, 3.5):
        # the update consumes exactly the draw of that tilted Beta
        params = PitmanYorParams(sigma=0.5, theta=1.0)
        state = make_state([0.5, 0.5, 0.5], np.full(5, 1e-4), [0, 0, 0, 1, 1])
        py_update_v_u(state, params, BASE, np.random.default_rng(2))
        expected = float(beta_rv(np.random.default_rng(2), 3.5, 3.5))
        assert state.v[0] == pytest.approx(expected, rel=1e-12)
        # and Beta(3.5, 3.5) is symmetric about one half
        draws = beta_rv(np.random.default_rng(22), np.full(20000, 3.5),
                        np.full(20000, 3.5))
        se = draws.std() / math.sqrt(draws.shape[0])
        assert abs(draws.mean() - 0.5) < 3 * se


class TestSigmaUpdate:
    def test_one_point_grid_unchanged(self):
        params = PitmanYorParams(sigma=0.25, theta=1.0)
        state = make_state([0.5, 0.4], [1e-3], [0])
        out = py_update_sigma(state, params, np.array([0.25]),
                              np.random.default_rng(3))
        assert out.sigma == 0.25
        assert out.theta == 1.0

    def test_grid_points_breaking_theta_constraint_are_excluded(self):
        params = PitmanYorParams(sigma=0.7, theta=-0.5)
        state = make_state([0.5, 0.4], [1e-3], [0])
        rng = np.random.default_rng(4)
        for _ in range(20):
            out = py_update_sigma(state, params, default_sigma_grid(), rng)
            assert out.sigma > 0.5

    def test_loglik_finite_on_interior_variables(self):
        v = np.random.default_rng(5).uniform(0.05, 0.95, 30)
        logliks = _sigma_grid_logliks(v, 1.0, default_sigma_grid())
        assert np.all(np.isfinite(logliks))

    def test_self_consistency_recovers_the_discount(self):
        # length variables generated at sigma=0.7 should put the grid
        # posterior mode near 0.7 in most repetitions
        rng = np.random.default_rng(6)
        grid = default_sigma_grid()
        hits = 0
        for _ in range(100):
            v = np.array([rng.beta(1 - 0.7, 1.0 + (i + 1) * 0.7)
                          for i in range(50)])
            v = np.clip(v, 1e-12, 1 - 1e-12)
            logliks = _sigma_grid_logliks(v, 1.0, grid)
            if abs(grid[int(np.argmax(logliks))] - 0.7) <= 0.1:
                hits += 1
        assert hits > 50


class TestRunPitmanYor:
    def test_zero_discount_matches_dirichlet_mixture_trace(self):
        rng = np.random.default_rng(7)
        y = np.concatenate([rng.normal(-2, 0.6, 20), rng.normal(2, 0.6, 20)])
        base = NormalGammaBase(location=float(y.mean()), scale_factor=100.0,
                               shape=0.5, rate=0.5)
        config = GibbsConfig(iterations=200, burn_in=50, seed=9)
        py = run_pitman_yor(y, PitmanYorParams(sigma=0.0, theta=1.0), base,
                            config, sigma_grid=None)
        dp = run_gibbs(y, BBSBParams(kappa=0, alpha=1.0, theta=1.0), base,
                       config)
        assert py.traces["K_n"] == dp.traces["K_n"]
        assert py.traces["phi"] == dp.traces["phi"]
        np.testing.assert_allclose(py.traces["log_joint"],
                                   dp.traces["log_joint"], rtol=1e-10)
        np.testing.assert_array_equal(py.density, dp.density)

    def test_random_discount_histogram_normalizes(self):
        rng = np.random.default_rng(8)
        y = rng.normal(0, 1, 30)
        summary = run_pitman_yor(y, PitmanYorParams(sigma=0.0, theta=1.0),
                                 BASE,
                                 GibbsConfig(iterations=150, burn_in=50,
                                             seed=10),
                                 sigma_grid=default_sigma_grid())
        assert summary.param_name == "sigma"
        assert summary.param_hist.proportions().sum() == pytest.approx(1.0)
        assert np.all(np.isfinite(summary.traces["log_joint"]))

    def test_rejects_kappa_prior(self):
        from bbsb.mixture import KappaPrior

        with pytest.raises(ValueError):
            run_pitman_yor(np.array([1.0]), PitmanYorParams(0.0, 1.0), BASE,
                           GibbsConfig(iterations=10, burn_in=0, seed=0,
                                       kappa_prior=KappaPrior.uniform(0, 5)))
