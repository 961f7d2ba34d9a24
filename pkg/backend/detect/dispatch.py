import numpy as np

from detect.conventional import conventional_mcmc
from detect.oracle import DEFAULT_ORACLE_CAP, ml_bruteforce
from detect.params import DetectorKind, DetectorParams, DetectorResult
from detect.restarts import mmse_ops, rmcmc_with_restarts
from detect.rmcmc import rmcmc
from system_model.alphabet import ModAlphabet
from system_model.cost import NoiseStatsMode
from system_model.mmse import mmse_detect


def run_detector(
    kind: DetectorKind,
    sys,
    alphabet: ModAlphabet,
    params: DetectorParams,
    rng: np.random.Generator,
    mode: NoiseStatsMode = NoiseStatsMode.PERFECT_CSI,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> DetectorResult:
    """Run one detector on one system. Single-chain detectors start from the MMSE decision."""
    kind = DetectorKind(kind)
    if kind == DetectorKind.ML_ORACLE:
        return ml_bruteforce(sys, alphabet, cap=oracle_cap)
    if kind == DetectorKind.RMCMC_R:
        return rmcmc_with_restarts(sys, alphabet, params, rng, mode)
    if kind == DetectorKind.CONV_MCMC_R:
        return rmcmc_with_restarts(sys, alphabet, params, rng, mode, base="conventional")

    x_mmse = mmse_detect(sys, alphabet)
    start_ops = mmse_ops(sys.n_rows, sys.n_dim)
    if kind == DetectorKind.MMSE:
        return DetectorResult(x_hat=x_mmse, best_cost=sys.cost(x_mmse), real_ops=start_ops)
    if kind == DetectorKind.CONV_MCMC:
        result = conventional_mcmc(sys, alphabet, x_mmse, params, rng)
    else:
        result = rmcmc(sys, alphabet, x_mmse, params, rng, mode)
    result.real_ops += start_ops
    return result
