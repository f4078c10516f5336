"""Stick-breaking weights, truncation growth and prior group counts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats
from scipy.integrate import quad

from bbsb import (
    BBSBParams,
    INFINITY,
    KnHistogram,
    TruncationError,
    extend_until,
    prob_decreasing,
    sample_Kn,
    sample_chain,
    stick_break,
)


def crp_group_count(n, theta, rng):
    """Chinese-restaurant seating oracle for the Dirichlet-process K_n."""
    counts = []
    for i in range(n):
        if rng.random() < theta / (theta + i):
            counts.append(1)
        else:
            probs = np.array(counts) / i
            counts[rng.choice(len(counts), p=probs)] += 1
    return len(counts)


class TestStickBreak:
    def test_whole_stick(self):
        sticks = stick_break([1.0])
        assert sticks.w == [1.0]
        assert sticks.cum == [1.0]

    def test_halving(self):
        sticks = stick_break([0.5, 0.5, 0.5])
        assert sticks.w == [0.5, 0.25, 0.125]

    def test_constant_variable_gives_geometric_weights(self):
        lam = 0.3
        sticks = stick_break([lam] * 12)
        expected = [lam * (1 - lam) ** j for j in range(12)]
        np.testing.assert_allclose(sticks.w, expected, rtol=1e-12)

    def test_unit_variable_terminates_the_stick(self):
        sticks = stick_break([0.25, 1.0, 0.7])
        assert sticks.w == [0.25, 0.75, 0.0]
        assert sticks.cum[-1] == 1.0

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            stick_break([0.5, 1.2])
        with pytest.raises(ValueError):
            stick_break([-0.1])

    @given(st.lists(st.floats(min_value=1e-3, max_value=1 - 1e-3),
                    min_size=1, max_size=40))
    @settings(max_examples=200, deadline=None)
    def test_weight_identity_and_cumulative_bounds(self, v):
        sticks = stick_break(v)
        residual = 1.0
        for v_j, w_j in zip(v, sticks.w):
            assert w_j == pytest.approx(residual * v_j, rel=1e-12)
            residual *= 1 - v_j
        cum = np.asarray(sticks.cum)
        increments = np.diff(cum)
        assert np.all(increments >= 0)
        # strictness can only be observed while the weight is representable
        # against the running sum
        assert np.all(increments[np.asarray(sticks.w[1:]) > 1e-12] > 0)
        assert cum[-1] <= 1.0

    def test_deep_stick_switches_to_log_space(self):
        # residual after 2000 sticks at v=0.5 is ~1e-602, far below float range
        sticks = stick_break([0.5] * 2000)
        assert sticks.remaining > 0 or sticks.log_remaining < -1300
        assert sticks.log_remaining == pytest.approx(2000 * math.log(0.5),
                                                     rel=1e-9)
        assert sticks.w[-1] >= 0.0


class TestExtendUntil:
    def test_zero_threshold_stops_after_one_stick(self):
        params = BBSBParams(kappa=0, alpha=1.0, theta=1.0)
        state = extend_until(params, 0.0, np.random.default_rng(0))
        assert len(state) == 1

    def test_expected_stick_count_for_independent_uniform_variables(self):
        # with alpha=theta=1 the log residual decays by Exp(1) jumps, so the
        # first passage below 2^-20 takes on average 1 + 20*log(2) sticks
        params = BBSBParams(kappa=0, alpha=1.0, theta=1.0)
        rng = np.random.default_rng(1)
        threshold = 1.0 - 2.0 ** -20
        counts = [len(extend_until(params, threshold, rng))
                  for _ in range(10000)]
        expected = 1.0 + 20.0 * math.log(2.0)
        assert abs(np.mean(counts) - expected) < 0.1 * expected

    def test_cumulative_weights_increase_and_stay_below_one(self):
        rng = np.random.default_rng(2)
        for params in (BBSBParams(0, 1.0, 3.0), BBSBParams(10, 1.0, 1.0),
                       BBSBParams(INFINITY, 1.0, 1.0)):
            state = extend_until(params, 0.999, rng)
            cum = np.asarray(state.cum)
            assert np.all(np.diff(cum) > 0)
            assert cum[-1] <= 1.0
            assert cum[-1] > 0.999

    def test_continues_one_coherent_chain(self):
        params = BBSBParams(kappa=INFINITY, alpha=1.0, theta=1.0)
        rng = np.random.default_rng(3)
        state = extend_until(params, 0.5, rng)
        state = extend_until(params, 0.99, rng, state=state)
        assert np.all(np.asarray(state.v) == state.v[0])

    def test_cap_is_an_error(self):
        params = BBSBParams(kappa=0, alpha=1.0, theta=50.0)
        with pytest.raises(TruncationError):
            extend_until(params, 0.999, np.random.default_rng(4),
                         max_sticks=5)

    def test_rejects_bad_threshold(self):
        params = BBSBParams(kappa=0, alpha=1.0, theta=1.0)
        with pytest.raises(ValueError):
            extend_until(params, 1.0, np.random.default_rng(5))


class TestSampleKn:
    def test_single_observation_is_one_group(self):
        hist = sample_Kn(1, BBSBParams(3, 1.0, 1.0), 200,
                         np.random.default_rng(6))
        assert hist.counts == {1: 200}

    def test_dirichlet_process_mean_matches_harmonic_sum(self):
        params = BBSBParams(kappa=0, alpha=1.0, theta=1.0)
        hist = sample_Kn(20, params, 10000, np.random.default_rng(7))
        expected = sum(1.0 / i for i in range(1, 21))
        se = math.sqrt(hist.variance() / hist.reps)
        assert abs(hist.mean() - expected) < 3 * se

    def test_total_variation_against_chinese_restaurant(self):
        params = BBSBParams(kappa=0, alpha=1.0, theta=1.0)
        hist = sample_Kn(20, params, 10000, np.random.default_rng(8))
        rng = np.random.default_rng(9)
        crp = KnHistogram.from_samples(
            20, [crp_group_count(20, 1.0, rng) for _ in range(10000)])
        assert hist.total_variation(crp) < 0.03

    def test_geometric_prior_spreads_with_theta(self):
        rng = np.random.default_rng(10)
        means, variances = [], []
        for theta in (0.5, 1.0, 3.0, 10.0):
            hist = sample_Kn(20, BBSBParams(INFINITY, 1.0, theta), 3000, rng)
            means.append(hist.mean())
            variances.append(hist.variance())
        assert means == sorted(means)
        # dispersion also grows until the group count nears its ceiling of
        # n=20, after which it necessarily shrinks again
        assert variances[:3] == sorted(variances[:3])

    def test_histogram_bookkeeping(self):
        hist = KnHistogram.from_samples(5, [1, 1, 2, 3, 3, 3])
        assert hist.reps == 6
        assert hist.mode() == 3
        assert sum(hist.proportions().values()) == pytest.approx(1.0)
        assert hist.quantile(0.5) == 2

    def test_csv_round_trip(self, tmp_path):
        hist = sample_Kn(10, BBSBParams(0, 1.0, 1.0), 500,
                         np.random.default_rng(11))
        path = tmp_path / "kn.csv"
        hist.to_csv(path)
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "m,count,proportion"
        counts = {int(r.split(",")[0]): int(r.split(",")[1])
                  for r in rows[1:]}
        assert counts == hist.counts


class TestProbDecreasing:
    def test_geometric_weights_always_decrease(self):
        est = prob_decreasing(3, BBSBParams(INFINITY, 1.0, 1.0), 1000,
                              np.random.default_rng(12))
        assert est.estimate == 1.0
        assert est.stderr == 0.0

    def test_independent_uniform_case_matches_integral_oracle(self):
        # P[v2*(1-v1) < v1] for independent Uniform(0,1) variables equals
        # the area integral of min(v/(1-v), 1), which is log(2)
        oracle, _ = quad(lambda v: min(v / (1.0 - v), 1.0), 0.0, 1.0)
        assert oracle == pytest.approx(math.log(2.0), abs=1e-9)
        est = prob_decreasing(1, BBSBParams(0, 1.0, 1.0), 100000,
                              np.random.default_rng(13))
        assert abs(est.estimate - oracle) < 3 * est.stderr

    def test_monotone_trend_in_kappa(self):
        rng = np.random.default_rng(14)
        estimates = [prob_decreasing(1, BBSBParams(k, 1.0, 1.0), 100000, rng)
                     for k in (0, 10, 100, 1000)]
        for lo, hi in zip(estimates, estimates[1:]):
            assert hi.estimate >= lo.estimate - 3 * (lo.stderr + hi.stderr)

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            prob_decreasing(0, BBSBParams(0, 1.0, 1.0), 10,
                            np.random.default_rng(15))


class TestResidualBounds:
    @pytest.mark.parametrize("kappa", [1, 10, 100])
    def test_expected_residual_between_printed_bounds(self, kappa):
        # the mean of prod_{i<=j}(1-v_i) is sandwiched by geometric envelopes
        # obtained from the extreme values of the latent counts
        alpha = theta = 1.0
        params = BBSBParams(kappa, alpha, theta)
        rng = np.random.default_rng(16)
        reps, depth = 10000, 10
        residuals = np.empty((reps, depth))
        for r in range(reps):
            v = sample_chain(params, depth, rng).v
            residuals[r] = np.cumprod(1.0 - v)
        for j in range(1, depth + 1):
            lower = (theta / (alpha + theta + kappa)) * \
                (theta / (alpha + theta + 2 * kappa)) ** (j - 1)
            upper = ((theta + kappa) / (alpha + theta)) * \
                ((theta + 2 * kappa) / (alpha + theta + 2 * kappa)) ** (j - 1)
            column = residuals[:, j - 1]
            se = column.std() / math.sqrt(reps)
            assert column.mean() > lower - 4 * se
            assert column.mean() < upper + 4 * se

    def test_first_weight_of_unit_alpha_process_is_stick_beta(self):
        params = BBSBParams(kappa=0, alpha=1.0, theta=2.5)
        rng = np.random.default_rng(17)
        first = [extend_until(params, 0.0, rng).w[0] for _ in range(4000)]
        ks = stats.kstest(first, stats.beta(1.0, 2.5).cdf)
        assert ks.pvalue > 1e-3
