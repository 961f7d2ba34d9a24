import logging

import numpy as np

from chanest.iterative import DetectionTally, EstimationOutcome, IterationRecord
from cpsc.channel import CpscFrame, initial_fs_estimate, remove_cyclic_prefix
from cpsc.equalize import block_levels, block_symbols, equalize_block
from cpsc.estimation import estimate_fs_channel_data_phase
from cpsc.freq_model import build_freq_model, to_frequency
from detect.oracle import DEFAULT_ORACLE_CAP
from detect.params import DetectorKind, DetectorParams
from system_model.alphabet import ModAlphabet
from system_model.cost import NoiseStatsMode

logger = logging.getLogger(__name__)


def equalize_frame(frame: CpscFrame, taps: np.ndarray, Zbar_blocks: np.ndarray,
                   alphabet: ModAlphabet, params: DetectorParams, rng: np.random.Generator,
                   mode: NoiseStatsMode, kind: DetectorKind, oracle_cap: int = DEFAULT_ORACLE_CAP):
    cfg = frame.config
    model = build_freq_model(taps, cfg.I, frame.sigma2)
    detected = np.empty_like(frame.data)
    tally = DetectionTally()
    for q in range(cfg.Q):
        result = equalize_block(model, Zbar_blocks[q], alphabet, params, rng, mode, kind, oracle_cap)
        detected[q] = block_symbols(result.x_hat, cfg.K, cfg.I)
        tally.bits += cfg.K * cfg.I * alphabet.bits_per_symbol
        tally.bit_errors += alphabet.bit_errors(result.x_hat, block_levels(frame.data[q]))
        tally.real_ops += result.real_ops
        tally.sweeps += result.sweeps_used
        tally.restarts += result.restarts_used
        tally.detections += 1
    return detected, tally


def iterate_cpsc_estimation_detection(
    frame: CpscFrame,
    n_iters: int,
    params: DetectorParams,
    alphabet: ModAlphabet,
    rng: np.random.Generator,
    est_max: int = 2,
    kind: DetectorKind = DetectorKind.RMCMC_R,
    perfect_csi: bool = False,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> EstimationOutcome:
    """Pilot estimate, block equalization, then data-phase refinement and re-equalization.

    With ``perfect_csi`` the true taps are used and no refinement happens.
    Iteration records carry the per-tap MSE against the true channel.
    """
    cfg = frame.config
    taps_true = frame.channel.taps
    Zbar_blocks = to_frequency(remove_cyclic_prefix(frame.received, cfg.L))
    taps0 = taps_true if perfect_csi else initial_fs_estimate(frame.pilot_rx, cfg.b, cfg.K, cfg.L)
    mode = NoiseStatsMode.PERFECT_CSI if perfect_csi else NoiseStatsMode.PILOT_CSI
    rounds = 0 if perfect_csi else n_iters

    taps = taps0
    outcome = EstimationOutcome(H_hat=taps, X_hat=np.empty_like(frame.data))
    for iteration in range(rounds + 1):
        if iteration > 0:
            taps = estimate_fs_channel_data_phase(Zbar_blocks, outcome.X_hat, taps0, frame.sigma2,
                                                  est_max, rng, cfg.pdp)
        detected, tally = equalize_frame(frame, taps, Zbar_blocks, alphabet, params, rng, mode, kind,
                                          oracle_cap)
        mse = float(np.mean(np.abs(taps - taps_true) ** 2))
        outcome.H_hat, outcome.X_hat = taps, detected
        outcome.records.append(IterationRecord(iteration=iteration, mse=mse, tally=tally))
        logger.debug("cpsc iteration %d: mse=%.3e bit errors=%d", iteration, mse, tally.bit_errors)
    return outcome
