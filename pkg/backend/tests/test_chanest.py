"""Pilot estimate, vectorized model, Gibbs channel estimator, CRLB and the estimation/detection loop."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from chanest.crlb import CrlbMode, crlb_mse
from chanest.frame import FrameConfig, assemble_flat_frame, generate_flat_frame, initial_estimate
from chanest.gibbs_estimator import (
    GibbsEstimatorState,
    gibbs_channel_estimate,
    gibbs_conditional_params,
    gibbs_estimator_run,
)
from chanest.iterative import channel_mse, iterate_estimation_detection
from chanest.vectorized import DenseLinearModel, channel_to_g, g_to_channel, vectorize_frame
from detect.params import DetectorKind, DetectorParams
from errors import DimensionError, OracleCapExceededError, SingularFrameError
from system_model.channel import complex_gaussian, snr_to_sigma2
from system_model.lifting import lift_matrix


def _noiseless_frame(cfg, alphabet, rng):
    H_c = complex_gaussian(rng, (cfg.N, cfg.K))
    levels = alphabet.random_levels(rng, (2, cfg.K, cfg.Q * cfg.K))
    noise = np.zeros((cfg.N, cfg.frame_length), dtype=complex)
    return assemble_flat_frame(cfg, H_c, levels[0] + 1j * levels[1], noise, 1e-12)


class TestFrameConfig:
    """Flat frame layout."""

    def test_pilot_amplitude(self, qam4):
        cfg = FrameConfig.build(16, 16, 9, qam4)
        assert cfg.p == pytest.approx(np.sqrt(32.0))
        assert cfg.frame_length == 160
        assert_allclose(cfg.pilot_matrix, cfg.p * np.eye(16))

    def test_generated_frame_shapes(self, rng, qam4):
        cfg = FrameConfig.build(3, 4, 2, qam4)
        frame = generate_flat_frame(cfg, qam4, 0.1, rng)
        assert frame.Y.shape == (4, 9)
        assert frame.X_data.shape == (3, 6)
        assert_allclose(frame.Y, frame.H_c @ frame.X + frame.noise)


class TestInitialEstimate:
    """Closed-form pilot estimate."""

    def test_noiseless_exact(self, rng, qam4):
        cfg = FrameConfig.build(4, 5, 0, qam4)
        frame = _noiseless_frame(cfg, qam4, rng)
        assert_allclose(initial_estimate(frame.Y_pilot, cfg.p), frame.H_c, atol=1e-14)

    def test_error_variance(self, rng, qam4):
        cfg = FrameConfig.build(4, 4, 0, qam4)
        sigma2 = 0.5
        errors = []
        for _ in range(2000):
            frame = generate_flat_frame(cfg, qam4, sigma2, rng)
            errors.append(np.abs(initial_estimate(frame.Y_pilot, cfg.p) - frame.H_c) ** 2)
        assert np.mean(errors) == pytest.approx(sigma2 / cfg.p ** 2, rel=0.03)


class TestVectorizeFrame:
    """Row-stacked lifted channel model."""

    def test_noiseless_identity(self, rng, qam4):
        cfg = FrameConfig.build(3, 4, 2, qam4)
        frame = _noiseless_frame(cfg, qam4, rng)
        model = vectorize_frame(frame.Y, frame.X)
        assert_allclose(model.r - model.apply(channel_to_g(frame.H_c)), 0.0, atol=1e-10)

    def test_matches_dense_kronecker(self, rng, qam4):
        cfg = FrameConfig.build(2, 2, 1, qam4)
        frame = generate_flat_frame(cfg, qam4, 0.3, rng)
        model = vectorize_frame(frame.Y, frame.X)
        S = np.kron(np.eye(2 * cfg.N), model.X_lift.T)
        g = rng.standard_normal(model.n_coef)
        assert_allclose(model.apply(g), S @ g, atol=1e-12)
        for i in range(model.n_coef):
            assert_allclose(model.column(i), S[:, i])
            assert model.column_norm2(i) == pytest.approx(S[:, i] @ S[:, i])

    def test_layout(self, rng):
        H_c = complex_gaussian(rng, (3, 2))
        g = channel_to_g(H_c)
        assert g.size == 4 * 3 * 2
        assert_array_equal(g.reshape(6, 4), lift_matrix(H_c))
        # coordinate 2K*p + q is lifted entry (p, q)
        assert g[4 * 1 + 3] == lift_matrix(H_c)[1, 3]
        assert_allclose(g_to_channel(g, 3, 2), H_c)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError, match="disagree on frame length"):
            vectorize_frame(np.zeros((2, 5), dtype=complex), np.zeros((2, 4), dtype=complex))


class TestGibbsConditionalParams:
    """Gaussian conditional of one channel coefficient."""

    def test_prior_only(self):
        A = np.array([[0.0, 1.0], [0.0, 2.0]])
        model = DenseLinearModel(A=A, z=np.array([1.0, -1.0]))
        state = GibbsEstimatorState.start(model, np.array([0.3, 0.1]))
        mean, var = gibbs_conditional_params(state, 0, sigma2=0.4)
        assert mean == pytest.approx(0.0)
        assert var == pytest.approx(0.5)

    def test_noiseless_orthogonal(self, rng):
        A = np.linalg.qr(rng.standard_normal((6, 3)))[0] * 2.0
        z = rng.standard_normal(6)
        model = DenseLinearModel(A=A, z=z)
        state = GibbsEstimatorState.start(model, np.zeros(3))
        for i in range(3):
            mean, var = gibbs_conditional_params(state, i, sigma2=1e-14)
            assert mean == pytest.approx(A[:, i] @ z / (A[:, i] @ A[:, i]), abs=1e-10)
            assert var < 1e-14

    @pytest.mark.parametrize("augmented", [True, False])
    def test_matches_grid_scan(self, rng, augmented):
        A = rng.standard_normal((5, 3))
        z = rng.standard_normal(5)
        g0 = rng.standard_normal(3)
        sigma2 = 0.8
        model = DenseLinearModel(A=A, z=z)
        state = GibbsEstimatorState.start(model, g0)
        i = 1
        s = A[:, i]
        r_excl = z - A @ g0 + g0[i] * s

        grid = np.linspace(-8.0, 8.0, 400_001)
        log_density = -grid ** 2 - ((r_excl[:, None] - np.outer(s, grid)) ** 2).sum(axis=0) / sigma2
        density = np.exp(log_density - log_density.max())
        grid_mean = np.sum(grid * density) / np.sum(density)
        grid_var = np.sum((grid - grid_mean) ** 2 * density) / np.sum(density)

        mean, var = gibbs_conditional_params(state, i, sigma2, augmented=augmented)
        assert mean == pytest.approx(grid_mean, abs=1e-6)
        if augmented:
            assert var == pytest.approx(grid_var, abs=1e-6)
        else:
            assert var == pytest.approx(sigma2 / (2.0 * (s @ s)))


class TestGibbsChannelEstimate:
    """Weighted-average Gibbs channel estimator."""

    def test_noiseless_pilot_block_one_sweep(self, rng, qam4):
        cfg = FrameConfig.build(3, 3, 0, qam4)
        frame = _noiseless_frame(cfg, qam4, rng)
        model = vectorize_frame(frame.Y, frame.X)
        g_star = gibbs_channel_estimate(model, 1e-14, np.zeros(model.n_coef), MAX=1, rng=rng)
        assert_allclose(g_star, channel_to_g(frame.H_c), atol=1e-6)

    def test_truth_is_fixed_point_without_noise(self, rng, qam4):
        cfg = FrameConfig.build(3, 4, 3, qam4)
        frame = _noiseless_frame(cfg, qam4, rng)
        model = vectorize_frame(frame.Y, frame.X)
        g_true = channel_to_g(frame.H_c)
        g_star = gibbs_channel_estimate(model, 1e-14, g_true, MAX=2, rng=rng)
        assert_allclose(g_star, g_true, atol=1e-6)

    def test_streaming_average_matches_batch(self, rng, qam4):
        cfg = FrameConfig.build(2, 2, 1, qam4)
        frame = generate_flat_frame(cfg, qam4, 0.5, rng)
        model = vectorize_frame(frame.Y, frame.X)
        g0 = channel_to_g(initial_estimate(frame.Y_pilot, cfg.p))
        state = gibbs_estimator_run(model, 0.5, g0, 4, rng, keep_history=True)
        samples = np.stack([h[0] for h in state.history])
        weights = np.stack([h[1] for h in state.history])
        batch = (weights * samples).sum(axis=0) / weights.sum(axis=0)
        assert_allclose(state.g_star, batch, atol=1e-10)
        assert np.all((weights > 0) & (weights <= 1))

    def test_improves_on_pilot_estimate(self, rng, qam4):
        cfg = FrameConfig.build(4, 4, 9, qam4)
        sigma2 = snr_to_sigma2(6.0, cfg.K, qam4.Es)
        pilot_mse, gibbs_mse = [], []
        for _ in range(10):
            frame = generate_flat_frame(cfg, qam4, sigma2, rng)
            H0 = initial_estimate(frame.Y_pilot, cfg.p)
            model = vectorize_frame(frame.Y, frame.X)
            g_star = gibbs_channel_estimate(model, sigma2, channel_to_g(H0), MAX=2, rng=rng)
            pilot_mse.append(channel_mse(H0, frame.H_c))
            gibbs_mse.append(channel_mse(g_to_channel(g_star, cfg.N, cfg.K), frame.H_c))
        assert np.mean(gibbs_mse) < np.mean(pilot_mse)


class TestCrlbMse:
    """Cramer-Rao bound per complex coefficient."""

    def test_pilot_only_matches_estimator(self, qam4):
        cfg = FrameConfig.build(8, 8, 0, qam4)
        assert crlb_mse(cfg, 0.3, CrlbMode.PILOT_ONLY) == pytest.approx(0.3 / cfg.p ** 2)

    def test_orthogonal_full_frame(self, qam4):
        cfg = FrameConfig.build(4, 4, 9, qam4)
        X = np.hstack([cfg.pilot_matrix] * (cfg.Q + 1))
        expected = crlb_mse(cfg, 0.3, CrlbMode.PILOT_ONLY) / (cfg.Q + 1)
        assert crlb_mse(cfg, 0.3, CrlbMode.FULL_FRAME) == pytest.approx(expected)
        assert crlb_mse(cfg, 0.3, CrlbMode.FULL_FRAME, X) == pytest.approx(expected)

    def test_matches_fisher_matrix(self, rng, qam4):
        cfg = FrameConfig.build(3, 3, 2, qam4)
        frame = generate_flat_frame(cfg, qam4, 0.2, rng)
        sigma2 = 0.2
        A = lift_matrix(frame.X.T)
        fisher = A.T @ A / (sigma2 / 2.0)
        expected = np.trace(np.linalg.inv(fisher)) / cfg.K
        assert crlb_mse(cfg, sigma2, "full_frame", frame.X) == pytest.approx(expected, rel=1e-9)

    def test_singular(self, qam4):
        cfg = FrameConfig.build(2, 2, 1, qam4)
        with pytest.raises(SingularFrameError, match="singular"):
            crlb_mse(cfg, 0.1, CrlbMode.FULL_FRAME, np.ones((2, 4), dtype=complex))


class TestIterateEstimationDetection:
    """Alternating channel refinement and detection."""

    def test_perfect_csi_noiseless_fixed_point(self, rng, qam4):
        cfg = FrameConfig.build(4, 4, 3, qam4)
        frame = _noiseless_frame(cfg, qam4, rng)
        outcome = iterate_estimation_detection(
            frame, 2, DetectorParams.for_system(4, 4), qam4, rng, initial_channel=frame.H_c,
        )
        assert [r.iteration for r in outcome.records] == [0, 1, 2]
        for record in outcome.records:
            assert record.tally.bit_errors == 0
            assert record.tally.bits == 4 * 12 * 2
            assert record.mse < 1e-9
        assert_array_equal(outcome.X_hat, frame.X_data)

    def test_records_and_detector_choice(self, rng, qam4):
        cfg = FrameConfig.build(2, 2, 2, qam4)
        frame = generate_flat_frame(cfg, qam4, snr_to_sigma2(10.0, 2, qam4.Es), rng)
        outcome = iterate_estimation_detection(
            frame, 1, DetectorParams.for_system(2, 4), qam4, rng, kind=DetectorKind.MMSE,
        )
        assert len(outcome.records) == 2
        assert outcome.records[0].mse == pytest.approx(
            channel_mse(initial_estimate(frame.Y_pilot, cfg.p), frame.H_c))
        assert outcome.records[1].tally.detections == cfg.Q * cfg.K

    @pytest.mark.slow
    def test_mse_improves_over_iterations(self, rng, qam4):
        cfg = FrameConfig.build(8, 8, 9, qam4)
        sigma2 = snr_to_sigma2(8.0, cfg.K, qam4.Es)
        mse = np.zeros(3)
        for _ in range(6):
            frame = generate_flat_frame(cfg, qam4, sigma2, rng)
            outcome = iterate_estimation_detection(frame, 2, DetectorParams.for_system(8, 4), qam4, rng)
            mse += [r.mse for r in outcome.records]
        assert mse[1] < mse[0]
        assert mse[2] < mse[0]

    def test_oracle_cap_reaches_detector(self, rng, qam4):
        cfg = FrameConfig.build(2, 2, 2, qam4)
        frame = generate_flat_frame(cfg, qam4, snr_to_sigma2(10.0, 2, qam4.Es), rng)
        params = DetectorParams.for_system(2, 4)
        with pytest.raises(OracleCapExceededError, match="exceeds the oracle cap"):
            iterate_estimation_detection(frame, 0, params, qam4, rng, kind=DetectorKind.ML_ORACLE, oracle_cap=8)
        outcome = iterate_estimation_detection(frame, 0, params, qam4, rng, kind=DetectorKind.ML_ORACLE,
                                               oracle_cap=16)
        assert outcome.records[0].tally.sweeps == 0
