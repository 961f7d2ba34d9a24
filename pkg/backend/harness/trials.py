"""One Monte Carlo trial per scenario, plus the per-iteration accumulators."""

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from chanest.frame import FrameConfig, generate_flat_frame
from chanest.iterative import DetectionTally, iterate_estimation_detection
from cpsc.channel import CpscConfig, generate_cpsc_frame
from cpsc.iterative import iterate_cpsc_estimation_detection
from detect.dispatch import run_detector
from harness.config import Scenario, SimConfig
from system_model.alphabet import build_alphabet
from system_model.channel import complex_gaussian, generate_flat_channel, snr_to_sigma2
from system_model.cost import NoiseStatsMode
from system_model.lifting import lift_to_real, lift_vector


@dataclass
class Accumulator:
    trials: int = 0
    bits: int = 0
    bit_errors: int = 0
    real_ops: int = 0
    sweeps: int = 0
    restarts: int = 0
    detections: int = 0
    mse_sum: float = 0.0
    mse_count: int = 0

    def add_tally(self, tally: DetectionTally, mse: Optional[float] = None) -> None:
        self.trials += 1
        self.bits += tally.bits
        self.bit_errors += tally.bit_errors
        self.real_ops += tally.real_ops
        self.sweeps += tally.sweeps
        self.restarts += tally.restarts
        self.detections += tally.detections
        if mse is not None:
            self.mse_sum += mse
            self.mse_count += 1

    def merge(self, other: "Accumulator") -> None:
        for name in ("trials", "bits", "bit_errors", "real_ops", "sweeps", "restarts", "detections",
                     "mse_sum", "mse_count"):
            setattr(self, name, getattr(self, name) + getattr(other, name))


@dataclass
class BatchTally:
    by_iteration: Dict[int, Accumulator] = field(default_factory=dict)

    def get(self, iteration: int) -> Accumulator:
        return self.by_iteration.setdefault(iteration, Accumulator())

    def merge(self, other: "BatchTally") -> None:
        for iteration, acc in other.by_iteration.items():
            self.get(iteration).merge(acc)

    @property
    def final_iteration(self) -> int:
        return max(self.by_iteration) if self.by_iteration else 0


def trial_rng(master_seed: int, snr_index: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, snr_index, trial_index]))


def flat_perfect_trial(config: SimConfig, sigma2: float, rng: np.random.Generator, tally: BatchTally) -> None:
    alphabet = build_alphabet(config.M)
    channel = generate_flat_channel(config.K, config.N, config.imbalance, rng)
    levels = alphabet.random_levels(rng, (2, config.K))
    x_c = levels[0] + 1j * levels[1]
    y_c = channel.H_c @ x_c + complex_gaussian(rng, config.N, sigma2)
    sys = lift_to_real(channel.H_c, y_c, sigma2)
    result = run_detector(config.detector, sys, alphabet, config.detector_params(), rng,
                          NoiseStatsMode.PERFECT_CSI, config.oracle_cap)
    tally.get(0).add_tally(DetectionTally(
        bits=config.K * alphabet.bits_per_symbol,
        bit_errors=alphabet.bit_errors(result.x_hat, lift_vector(x_c)),
        real_ops=result.real_ops,
        sweeps=result.sweeps_used,
        restarts=result.restarts_used,
        detections=1,
    ))


def flat_estimated_trial(config: SimConfig, sigma2: float, rng: np.random.Generator, tally: BatchTally) -> None:
    alphabet = build_alphabet(config.M)
    frame_cfg = FrameConfig.build(config.K, config.N, config.Q, alphabet)
    frame = generate_flat_frame(frame_cfg, alphabet, sigma2, rng, config.imbalance)
    outcome = iterate_estimation_detection(
        frame, config.est_iters, config.detector_params(), alphabet, rng,
        est_max=config.est_max, kind=config.detector, augmented=config.use_augmented_norm,
        oracle_cap=config.oracle_cap,
    )
    for record in outcome.records:
        tally.get(record.iteration).add_tally(record.tally, record.mse)


def cpsc_trial(config: SimConfig, sigma2: float, rng: np.random.Generator, tally: BatchTally) -> None:
    alphabet = build_alphabet(config.M)
    cpsc_cfg = CpscConfig.build(config.K, config.N, config.L, config.I, config.Q, alphabet, config.pdp)
    frame = generate_cpsc_frame(cpsc_cfg, alphabet, sigma2, rng)
    outcome = iterate_cpsc_estimation_detection(
        frame, config.est_iters, config.detector_params(), alphabet, rng,
        est_max=config.est_max, kind=config.detector, perfect_csi=config.perfect_csi,
        oracle_cap=config.oracle_cap,
    )
    for record in outcome.records:
        tally.get(record.iteration).add_tally(record.tally, None if config.perfect_csi else record.mse)


TRIALS = {
    Scenario.FLAT_PERFECT_CSI: flat_perfect_trial,
    Scenario.FLAT_ESTIMATED: flat_estimated_trial,
    Scenario.CPSC: cpsc_trial,
}


def run_batch(config: SimConfig, snr_index: int, start: int, count: int) -> BatchTally:
    """Trials start..start+count-1 at one SNR point; module-level so worker processes can pickle it."""
    alphabet_es = build_alphabet(config.M).Es
    sigma2 = snr_to_sigma2(config.snr_grid_db[snr_index], config.K, alphabet_es, config.snr_convention)
    trial = TRIALS[config.scenario]
    tally = BatchTally()
    for trial_index in range(start, start + count):
        trial(config, sigma2, trial_rng(config.master_seed, snr_index, trial_index), tally)
    return tally
