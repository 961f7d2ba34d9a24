from dataclasses import dataclass, field
import logging
from typing import List, Optional

import numpy as np

from chanest.frame import FlatFrame, initial_estimate
from chanest.gibbs_estimator import gibbs_channel_estimate
from chanest.vectorized import channel_to_g, g_to_channel, vectorize_frame
from detect.dispatch import run_detector
from detect.oracle import DEFAULT_ORACLE_CAP
from detect.params import DetectorKind, DetectorParams
from system_model.alphabet import ModAlphabet
from system_model.cost import NoiseStatsMode
from system_model.lifting import lift_to_real, lift_vector, unlift_vector

logger = logging.getLogger(__name__)


@dataclass
class DetectionTally:
    bits: int = 0
    bit_errors: int = 0
    real_ops: int = 0
    sweeps: int = 0
    restarts: int = 0
    detections: int = 0

    def merge(self, other: "DetectionTally") -> None:
        self.bits += other.bits
        self.bit_errors += other.bit_errors
        self.real_ops += other.real_ops
        self.sweeps += other.sweeps
        self.restarts += other.restarts
        self.detections += other.detections


@dataclass
class IterationRecord:
    iteration: int
    mse: float
    tally: DetectionTally


@dataclass
class EstimationOutcome:
    H_hat: np.ndarray
    X_hat: np.ndarray
    records: List[IterationRecord] = field(default_factory=list)


def channel_mse(H_hat: np.ndarray, H_true: np.ndarray) -> float:
    return float(np.mean(np.abs(H_hat - H_true) ** 2))


def detect_columns(Y: np.ndarray, X_true: np.ndarray, H_est: np.ndarray, sigma2: float,
                   alphabet: ModAlphabet, params: DetectorParams, rng: np.random.Generator,
                   kind: DetectorKind = DetectorKind.RMCMC_R,
                   mode: NoiseStatsMode = NoiseStatsMode.PILOT_CSI,
                   oracle_cap: int = DEFAULT_ORACLE_CAP):
    """Detect every column of Y on its own against the channel H_est."""
    X_hat = np.empty_like(X_true)
    tally = DetectionTally()
    for t in range(Y.shape[1]):
        sys = lift_to_real(H_est, Y[:, t], sigma2)
        result = run_detector(kind, sys, alphabet, params, rng, mode, oracle_cap)
        X_hat[:, t] = unlift_vector(result.x_hat)
        tally.bits += X_true.shape[0] * alphabet.bits_per_symbol
        tally.bit_errors += alphabet.bit_errors(result.x_hat, lift_vector(X_true[:, t]))
        tally.real_ops += result.real_ops
        tally.sweeps += result.sweeps_used
        tally.restarts += result.restarts_used
        tally.detections += 1
    return X_hat, tally


def iterate_estimation_detection(
    frame: FlatFrame,
    n_iters: int,
    params: DetectorParams,
    alphabet: ModAlphabet,
    rng: np.random.Generator,
    est_max: int = 2,
    kind: DetectorKind = DetectorKind.RMCMC_R,
    initial_channel: Optional[np.ndarray] = None,
    augmented: bool = True,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> EstimationOutcome:
    """Alternate data detection and Gibbs channel refinement over one frame.

    Iteration 0 detects on the pilot estimate (or ``initial_channel``). Each
    later iteration refines the channel from the pilot estimate using the
    latest detected data, then detects again from scratch. Detection uses
    pilot-CSI residual statistics throughout.
    """
    cfg = frame.config
    H_pilot = initial_estimate(frame.Y_pilot, cfg.p) if initial_channel is None else initial_channel
    g0 = channel_to_g(H_pilot)
    H_hat = H_pilot
    outcome = EstimationOutcome(H_hat=H_hat, X_hat=np.empty_like(frame.X_data))

    for iteration in range(n_iters + 1):
        if iteration > 0:
            X_tot = np.hstack([cfg.pilot_matrix, outcome.X_hat])
            model = vectorize_frame(frame.Y, X_tot)
            g_star = gibbs_channel_estimate(model, frame.sigma2, g0, est_max, rng, augmented)
            H_hat = g_to_channel(g_star, cfg.N, cfg.K)
        X_hat, tally = detect_columns(frame.Y_data, frame.X_data, H_hat, frame.sigma2,
                                      alphabet, params, rng, kind, oracle_cap=oracle_cap)
        mse = channel_mse(H_hat, frame.H_c)
        outcome.H_hat, outcome.X_hat = H_hat, X_hat
        outcome.records.append(IterationRecord(iteration=iteration, mse=mse, tally=tally))
        logger.debug("iteration %d: mse=%.3e bit errors=%d/%d", iteration, mse, tally.bit_errors, tally.bits)
    return outcome
