"""Gibbs conditionals, MCMC detectors, restarts and the exhaustive ML oracle."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from conftest import flat_realization
from detect.conventional import conventional_mcmc, gibbs_sweeps
from detect.dispatch import run_detector
from detect.gibbs import GibbsChain, column_norms, gibbs_conditional_pmf, residual_of
from detect.oracle import ml_bruteforce
from detect.params import DetectorKind, DetectorParams, OpCounter
from detect.restarts import required_repetitions, rmcmc_with_restarts
from detect.rmcmc import rmcmc, stalling_limit
from errors import OracleCapExceededError
from system_model.alphabet import build_alphabet
from system_model.channel import complex_gaussian
from system_model.cost import NoiseStatsMode, standardized_cost
from system_model.lifting import RealSystem, lift_to_real, lift_vector
from system_model.mmse import mmse_detect


def _in_alphabet(x, alphabet):
    return bool(np.all(np.isin(x, alphabet.pam)))


class TestDetectorParams:
    """Parameter presets."""

    def test_restart_defaults_scale_with_order(self):
        p4 = DetectorParams.for_system(16, 4)
        assert (p4.c1, p4.c2, p4.max_iter, p4.R_max) == (20.0, 1.0, 256, 50)
        p16 = DetectorParams.for_system(16, 16)
        assert (p16.c1, p16.c2, p16.max_iter) == (40.0, 2.0, 512)
        p64 = DetectorParams.for_system(16, 64)
        assert (p64.c1, p64.c2, p64.max_iter) == (60.0, 3.0, 1024)
        assert p64.neighbor_restricted_random and not p16.neighbor_restricted_random

    def test_standalone_preset(self):
        preset = DetectorParams.rmcmc_preset(16)
        assert (preset.c_min, preset.c1, preset.max_iter) == (10, 20.0, 256)

    def test_overrides(self):
        assert DetectorParams.for_system(8, 4, max_iter=3).max_iter == 3

    def test_rejects_negative_budget(self):
        with pytest.raises(ValueError):
            DetectorParams(max_iter=-1)


class TestGibbsConditionalPmf:
    """Conditional distribution of one coordinate."""

    def test_equal_costs_give_uniform(self, qam16):
        sys = RealSystem(H=np.zeros((2, 2)), y=np.array([1.0, 0.0]), sigma2=1.0, N=1, K=1)
        pmf = gibbs_conditional_pmf(sys, qam16, np.array([1.0, -1.0]), 0)
        assert_allclose(pmf, np.full(4, 0.25))

    def test_hot_temperature_flattens(self, rng, qam16):
        sys, x = flat_realization(2, 2, qam16, 10.0, rng)
        pmf = gibbs_conditional_pmf(sys, qam16, x, 1, alpha=1e6)
        assert_allclose(pmf, np.full(4, 0.25), atol=1e-6)

    def test_matches_enumeration(self, rng, qam4):
        sys, x = flat_realization(2, 2, qam4, 6.0, rng)
        for i in range(sys.n_dim):
            costs = []
            for level in qam4.pam:
                trial = x.copy()
                trial[i] = level
                costs.append(sys.cost(trial))
            costs = np.array(costs)
            expected = np.exp(-(costs - costs.min()) / sys.sigma2)
            expected /= expected.sum()
            assert_allclose(gibbs_conditional_pmf(sys, qam4, x, i), expected, atol=1e-12)

    def test_zero_temperature_is_argmin(self, rng, qam16):
        sys, x = flat_realization(2, 2, qam16, 20.0, rng)
        sys = RealSystem(H=sys.H, y=sys.y, sigma2=0.0, N=sys.N, K=sys.K)
        pmf = gibbs_conditional_pmf(sys, qam16, x, 0)
        assert pmf.sum() == 1.0 and np.count_nonzero(pmf) == 1


class TestGibbsChain:
    """Cached residual bookkeeping."""

    def test_residual_tracks_state(self, rng, qam16):
        sys, _ = flat_realization(4, 4, qam16, 10.0, rng)
        chain = GibbsChain(sys, qam16, qam16.random_levels(rng, 8), 1.0, OpCounter())
        for _ in range(5):
            for i in range(sys.n_dim):
                chain.gibbs_update(i, rng)
            chain.random_update(int(rng.integers(sys.n_dim)), rng)
        assert_allclose(chain.residual, sys.y - sys.H @ chain.x, atol=1e-10)
        assert chain.cost() == pytest.approx(sys.cost(chain.x))

    def test_neighbor_restricted_moves_one_level(self, rng):
        qam64 = build_alphabet(64)
        sys, x = flat_realization(2, 2, qam64, 20.0, rng)
        chain = GibbsChain(sys, qam64, x, 1.0, OpCounter())
        for _ in range(50):
            before = chain.x[0]
            chain.random_update(0, rng, neighbors_only=True)
            assert abs(chain.x[0] - before) <= 2.0

    def test_shared_norms_and_residual(self, rng, qam4):
        sys, x = flat_realization(3, 4, qam4, 10.0, rng)
        assert_allclose(column_norms(sys), np.sum(sys.H ** 2, axis=0))
        assert_allclose(residual_of(sys, x), sys.y - sys.H @ x, atol=1e-12)


class TestStallingLimit:
    """Extra sweeps allowed after a stall."""

    @pytest.mark.parametrize("phi,expected", [(0.0, 20), (-5.0, 10), (1.0, 55)])
    def test_formula(self, phi, expected):
        assert stalling_limit(phi, DetectorParams(c_min=10, c1=20.0)) == expected

    def test_overflow_capped(self):
        params = DetectorParams(c_min=10, c1=20.0, max_iter=64)
        assert stalling_limit(1e6, params) == 64
        assert stalling_limit(math.inf, params) == 64


class TestRequiredRepetitions:
    """Repetitions needed before the restart loop trusts its best vector."""

    def test_nonpositive_phi(self):
        assert required_repetitions(-3.0, DetectorParams(c2=2.0)) == 1
        assert required_repetitions(0.0, DetectorParams(c2=2.0)) == 1

    @pytest.mark.parametrize("c2,expected", [(1.0, 2), (2.0, 4), (3.0, 5)])
    def test_grows_with_order(self, c2, expected):
        assert required_repetitions(1.6, DetectorParams(c2=c2)) == expected

    def test_infinite_phi_capped(self):
        assert required_repetitions(math.inf, DetectorParams(c2=1.0, R_max=50)) == 51


class TestConventionalMcmc:
    """Plain Gibbs detection."""

    def test_low_noise_keeps_truth(self, rng, qam16):
        sys, x = flat_realization(4, 4, qam16, 60.0, rng)
        result = conventional_mcmc(sys, qam16, x, DetectorParams(max_iter=10), rng)
        assert_array_equal(result.x_hat, x)
        assert result.sweeps_used == 10

    @pytest.mark.slow
    def test_stationary_distribution(self, rng, qam4):
        H = np.array([[1.0, 0.6], [0.3, -0.8]])
        y = np.array([0.4, -0.2])
        sys = RealSystem(H=H, y=y, sigma2=1.5, N=1, K=1)
        states = [np.array([a, b]) for a in qam4.pam for b in qam4.pam]
        weights = np.array([math.exp(-sys.cost(s) / sys.sigma2) for s in states])
        posterior = weights / weights.sum()

        counts = np.zeros(4)
        chain = gibbs_sweeps(sys, qam4, np.array([1.0, 1.0]), 1.0, rng)
        for _ in range(500):
            next(chain)
        n_samples = 100_000
        for _ in range(n_samples):
            x = next(chain)
            counts[2 * int(x[0] > 0) + int(x[1] > 0)] += 1
        tv = 0.5 * np.abs(counts / n_samples - posterior).sum()
        assert tv <= 0.02


class TestRmcmc:
    """Randomized Gibbs detection with the stalling stop."""

    def test_zero_budget_returns_start(self, rng, qam4):
        sys, _ = flat_realization(4, 4, qam4, 10.0, rng)
        x0 = qam4.random_levels(rng, 8)
        result = rmcmc(sys, qam4, x0, DetectorParams(max_iter=0), rng)
        assert_array_equal(result.x_hat, x0)
        assert result.best_cost == pytest.approx(sys.cost(x0))
        assert result.sweeps_used == 0

    def test_best_cost_nonincreasing(self, rng, qam16):
        sys, _ = flat_realization(6, 6, qam16, 15.0, rng)
        params = DetectorParams.for_system(6, 16, record_trace=True)
        result = rmcmc(sys, qam16, qam16.random_levels(rng, 12), params, rng)
        assert np.all(np.diff(result.trace) <= 0.0)
        assert len(result.trace) == result.sweeps_used + 1
        assert result.best_cost == pytest.approx(result.trace[-1])

    def test_output_in_alphabet_and_budget(self, rng, qam16):
        sys, _ = flat_realization(4, 4, qam16, 12.0, rng)
        params = DetectorParams.for_system(4, 16)
        result = rmcmc(sys, qam16, mmse_detect(sys, qam16), params, rng)
        assert _in_alphabet(result.x_hat, qam16)
        assert 1 <= result.sweeps_used <= params.max_iter
        assert result.real_ops > 0

    def test_one_random_coordinate_per_sweep(self, rng, qam4):
        sys, _ = flat_realization(2, 2, qam4, 8.0, rng)
        sweeps = 4000
        params = DetectorParams(max_iter=sweeps, stop_on_stall=False)
        result = rmcmc(sys, qam4, qam4.random_levels(rng, 4), params, rng)
        assert result.random_updates.sum() == sweeps
        p = 1.0 / sys.n_dim
        se = math.sqrt(sweeps * p * (1 - p))
        assert np.all(np.abs(result.random_updates - sweeps * p) <= 4 * se)

    def test_per_coordinate_randomization_rate(self, rng, qam4):
        sys, _ = flat_realization(2, 2, qam4, 8.0, rng)
        sweeps = 4000
        params = DetectorParams(max_iter=sweeps, stop_on_stall=False, randomize_each_coordinate=True)
        result = rmcmc(sys, qam4, qam4.random_levels(rng, 4), params, rng)
        p = 1.0 / sys.n_dim
        se = math.sqrt(sweeps * p * (1 - p))
        assert np.all(np.abs(result.random_updates - sweeps * p) <= 4 * se)

    def test_stall_stops_early(self, rng, qam4):
        sys, x = flat_realization(8, 8, qam4, 30.0, rng)
        params = DetectorParams(max_iter=10_000, c_min=10, c1=20.0)
        result = rmcmc(sys, qam4, x, params, rng)
        assert result.sweeps_used < params.max_iter

    def test_per_sweep_ops_grow_quadratically(self, rng, qam4):
        sizes = [8, 16, 32, 64, 128]
        per_sweep = []
        for K in sizes:
            sys, _ = flat_realization(K, K, qam4, 8.0, rng)
            x0 = qam4.random_levels(rng, 2 * K)
            ops = {}
            for sweeps in (10, 30):
                params = DetectorParams(max_iter=sweeps, stop_on_stall=False)
                ops[sweeps] = rmcmc(sys, qam4, x0, params, np.random.default_rng(K)).real_ops
            per_sweep.append((ops[30] - ops[10]) / 20.0)
        slope = np.polyfit(np.log(sizes), np.log(per_sweep), 1)[0]
        assert 1.9 <= slope <= 2.1


class TestRmcmcWithRestarts:
    """Restart wrapper and its repetition criterion."""

    def _easy_system(self, qam4):
        H_c = 2.0 * np.eye(4, dtype=complex)
        x_c = np.array([1 + 1j, -1 + 1j, 1 - 1j, -1 - 1j])
        return lift_to_real(H_c, H_c @ x_c, 1.0), lift_vector(x_c)

    def test_negative_phi_stops_after_one_restart(self, rng, qam4):
        sys, x = self._easy_system(qam4)
        result = rmcmc_with_restarts(sys, qam4, DetectorParams.for_system(4, 4), rng)
        assert result.restarts_used == 1
        assert_array_equal(result.x_hat, x)
        assert result.best_cost == pytest.approx(0.0, abs=1e-20)

    def test_fixed_restarts(self, rng, qam16):
        sys, _ = flat_realization(4, 4, qam16, 14.0, rng)
        params = DetectorParams.for_system(4, 16, fixed_restarts=3)
        result = rmcmc_with_restarts(sys, qam16, params, rng)
        assert result.restarts_used == 3
        assert len(result.restart_costs) == 3
        assert result.best_cost == pytest.approx(min(result.restart_costs))

    def test_restart_budget(self, rng, qam16):
        sys, _ = flat_realization(4, 4, qam16, 14.0, rng)
        params = DetectorParams.for_system(4, 16, R_max=2)
        result = rmcmc_with_restarts(sys, qam16, params, rng)
        assert 1 <= result.restarts_used <= 2

    def test_conventional_base(self, rng, qam16):
        sys, _ = flat_realization(4, 4, qam16, 14.0, rng)
        params = DetectorParams.for_system(4, 16, fixed_restarts=2, max_iter=20)
        result = rmcmc_with_restarts(sys, qam16, params, rng, base="conventional")
        assert result.sweeps_used == 40
        assert _in_alphabet(result.x_hat, qam16)

    def test_never_beats_ml(self, rng, qam4):
        for _ in range(20):
            sys, _ = flat_realization(3, 3, qam4, 6.0, rng)
            ml = ml_bruteforce(sys, qam4)
            result = rmcmc_with_restarts(sys, qam4, DetectorParams.for_system(3, 4), rng)
            assert min(result.restart_costs) >= ml.best_cost - 1e-9

    def test_repetition_stop_bookkeeping(self, rng, qam16):
        params = DetectorParams.for_system(4, 16, R_max=8)
        for _ in range(15):
            sys, _ = flat_realization(4, 4, qam16, 10.0, rng)
            result = rmcmc_with_restarts(sys, qam16, params, rng)
            costs = np.array(result.restart_costs)
            assert result.restarts_used == len(costs) <= params.R_max
            assert result.best_cost == min(costs)

            def stop_reached(upto):
                best = costs[:upto].min()
                repeats = int(np.sum(np.isclose(costs[:upto], best, rtol=1e-9, atol=1e-12)))
                phi = standardized_cost(best, sys.n_obs, sys.sigma2, NoiseStatsMode.PERFECT_CSI)
                return repeats >= required_repetitions(phi, params)

            assert not any(stop_reached(t) for t in range(1, len(costs)))
            if len(costs) < params.R_max:
                assert stop_reached(len(costs))

    @pytest.mark.slow
    def test_matches_ml_at_small_size(self, rng, qam4):
        trials, equal = 400, 0
        for _ in range(trials):
            sys, _ = flat_realization(4, 4, qam4, 11.0, rng)
            ml = ml_bruteforce(sys, qam4)
            result = rmcmc_with_restarts(sys, qam4, DetectorParams.for_system(4, 4), rng)
            assert result.best_cost >= ml.best_cost - 1e-9
            equal += bool(np.array_equal(result.x_hat, ml.x_hat))
        assert equal / trials >= 0.99


class TestMlBruteforce:
    """Exhaustive search."""

    def test_noiseless_recovers_truth(self, rng, qam4):
        H_c = complex_gaussian(rng, (3, 3))
        x_c = qam4.random_levels(rng, 3) + 1j * qam4.random_levels(rng, 3)
        sys = lift_to_real(H_c, H_c @ x_c, 0.1)
        result = ml_bruteforce(sys, qam4)
        assert_array_equal(result.x_hat, lift_vector(x_c))
        assert result.best_cost == pytest.approx(0.0, abs=1e-20)

    def test_orthogonal_single_user_decouples(self, rng, qam16):
        h = complex_gaussian(rng, (1, 1))
        y = complex_gaussian(rng, 1, 4.0)
        sys = lift_to_real(h, y, 1.0)
        per_coordinate = qam16.nearest(sys.H.T @ sys.y / np.abs(h[0, 0]) ** 2)
        assert_array_equal(ml_bruteforce(sys, qam16).x_hat, per_coordinate)

    def test_small_chunks_agree(self, rng, qam4):
        sys, _ = flat_realization(3, 3, qam4, 3.0, rng)
        assert_array_equal(ml_bruteforce(sys, qam4, chunk=7).x_hat, ml_bruteforce(sys, qam4).x_hat)

    def test_cap(self, rng, qam16):
        sys, _ = flat_realization(4, 4, qam16, 10.0, rng)
        with pytest.raises(OracleCapExceededError, match="exceeds the oracle cap"):
            ml_bruteforce(sys, qam16, cap=1000)


class TestRunDetector:
    """Detector dispatch."""

    @pytest.mark.parametrize("kind", list(DetectorKind))
    def test_every_kind_returns_alphabet_vector(self, kind, rng, qam4):
        sys, _ = flat_realization(3, 3, qam4, 10.0, rng)
        result = run_detector(kind, sys, qam4, DetectorParams.for_system(3, 4), rng)
        assert _in_alphabet(result.x_hat, qam4)
        assert result.x_hat.shape == (6,)
        assert result.real_ops > 0

    def test_mmse_kind(self, rng, qam4):
        sys, _ = flat_realization(3, 3, qam4, 10.0, rng)
        result = run_detector("mmse", sys, qam4, DetectorParams(), rng)
        assert_array_equal(result.x_hat, mmse_detect(sys, qam4))
        assert result.sweeps_used == 0
