import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from detect.dispatch import run_detector
from detect.oracle import DEFAULT_ORACLE_CAP, ml_bruteforce
from detect.params import DetectorKind, DetectorParams
from system_model.alphabet import build_alphabet
from system_model.channel import complex_gaussian, generate_flat_channel, snr_to_sigma2
from system_model.lifting import lift_to_real, lift_vector

logger = logging.getLogger(__name__)


class OracleEntry(BaseModel):
    detector: DetectorKind
    bit_errors: int
    ber: float
    tolerance: float
    within_tolerance: bool
    cost_violations: int
    equal_cost_rate: float


class OracleReport(BaseModel):
    K: int
    N: int
    M: int
    snr_db: float
    trials: int
    bits: int
    ml_bit_errors: int
    ml_ber: float
    entries: List[OracleEntry]

    @property
    def passed(self) -> bool:
        return all(e.within_tolerance and e.cost_violations == 0 for e in self.entries)


def counting_tolerance(p_a: float, p_b: float, bits: int) -> float:
    """Three standard errors of the difference of two binomial BER estimates."""
    if bits == 0:
        return 0.0
    return 3.0 * math.sqrt((p_a * (1 - p_a) + p_b * (1 - p_b)) / bits)


def oracle_check(
    K: int,
    M: int,
    snr_db: float,
    trials: int,
    seed: int = 0,
    N: Optional[int] = None,
    detectors: Sequence[DetectorKind] = (DetectorKind.RMCMC, DetectorKind.RMCMC_R),
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    progress: bool = False,
) -> OracleReport:
    """Compare detectors against exhaustive ML on identical flat perfect-CSI realizations."""
    N = K if N is None else N
    alphabet = build_alphabet(M)
    params = DetectorParams.for_system(K, M)
    sigma2 = snr_to_sigma2(snr_db, K, alphabet.Es)
    bits_per_trial = K * alphabet.bits_per_symbol

    ml_errors = 0
    errors = {kind: 0 for kind in detectors}
    violations = {kind: 0 for kind in detectors}
    equal = {kind: 0 for kind in detectors}

    for trial in tqdm(range(trials), desc="oracle check", disable=not progress):
        rng = np.random.default_rng(np.random.SeedSequence([seed, trial]))
        channel = generate_flat_channel(K, N, None, rng)
        levels = alphabet.random_levels(rng, (2, K))
        x_c = levels[0] + 1j * levels[1]
        y_c = channel.H_c @ x_c + complex_gaussian(rng, N, sigma2)
        sys = lift_to_real(channel.H_c, y_c, sigma2)
        x_true = lift_vector(x_c)

        ml = ml_bruteforce(sys, alphabet, cap=oracle_cap)
        ml_errors += alphabet.bit_errors(ml.x_hat, x_true)
        tol = 1e-9 * max(ml.best_cost, 1.0)
        for slot, kind in enumerate(detectors):
            det_rng = np.random.default_rng(np.random.SeedSequence([seed, trial, slot + 1]))
            result = run_detector(kind, sys, alphabet, params, det_rng)
            errors[kind] += alphabet.bit_errors(result.x_hat, x_true)
            if result.best_cost < ml.best_cost - tol:
                violations[kind] += 1
            if abs(result.best_cost - ml.best_cost) <= tol:
                equal[kind] += 1

    bits = trials * bits_per_trial
    ml_ber = ml_errors / bits if bits else 0.0
    entries = []
    for kind in detectors:
        ber = errors[kind] / bits if bits else 0.0
        tolerance = counting_tolerance(ml_ber, ber, bits)
        entries.append(OracleEntry(
            detector=kind,
            bit_errors=errors[kind],
            ber=ber,
            tolerance=tolerance,
            within_tolerance=errors[kind] == ml_errors or abs(ber - ml_ber) <= tolerance,
            cost_violations=violations[kind],
            equal_cost_rate=equal[kind] / trials if trials else 1.0,
        ))
        logger.info("%s: BER %.3e vs ML %.3e (tolerance %.1e)", kind.value, ber, ml_ber, tolerance)
    return OracleReport(K=K, N=N, M=M, snr_db=snr_db, trials=trials, bits=bits,
                        ml_bit_errors=ml_errors, ml_ber=ml_ber, entries=entries)
