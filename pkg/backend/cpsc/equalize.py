import numpy as np

from cpsc.freq_model import CpscBlockSystem, FreqDomainModel
from detect.dispatch import run_detector
from detect.oracle import DEFAULT_ORACLE_CAP
from detect.params import DetectorKind, DetectorParams, DetectorResult
from system_model.alphabet import ModAlphabet
from system_model.cost import NoiseStatsMode


def equalize_block(
    model: FreqDomainModel,
    Zbar: np.ndarray,
    alphabet: ModAlphabet,
    params: DetectorParams,
    rng: np.random.Generator,
    mode: NoiseStatsMode = NoiseStatsMode.PILOT_CSI,
    kind: DetectorKind = DetectorKind.RMCMC_R,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> DetectorResult:
    """Detect all K*I symbols of one block jointly; bins are coupled, so there is no per-bin split."""
    return run_detector(kind, CpscBlockSystem(model, Zbar), alphabet, params, rng, mode, oracle_cap)


def block_symbols(x_hat: np.ndarray, K: int, I: int) -> np.ndarray:
    """Real detector output -> K x I complex symbols."""
    half = K * I
    xc = x_hat[:half] + 1j * x_hat[half:]
    return xc.reshape(I, K).T


def block_levels(symbols: np.ndarray) -> np.ndarray:
    """K x I complex symbols -> real vector in the detector layout."""
    xc = symbols.T.reshape(-1)
    return np.concatenate([xc.real, xc.imag])
