"""Per-realization diagnostics written as plain tables: least-cost traces and standardized-cost histograms."""

import logging
import math

import numpy as np
import pandas as pd

from detect.conventional import conventional_mcmc
from detect.oracle import DEFAULT_ORACLE_CAP, ml_bruteforce
from detect.params import DetectorParams
from detect.restarts import rmcmc_with_restarts
from detect.rmcmc import rmcmc
from system_model.alphabet import build_alphabet
from system_model.channel import complex_gaussian, generate_flat_channel, snr_to_sigma2
from system_model.cost import NoiseStatsMode, standardized_cost
from system_model.lifting import lift_to_real, lift_vector

logger = logging.getLogger(__name__)


def _realization(K, N, alphabet, sigma2, rng):
    channel = generate_flat_channel(K, N, None, rng)
    levels = alphabet.random_levels(rng, (2, K))
    x_c = levels[0] + 1j * levels[1]
    y_c = channel.H_c @ x_c + complex_gaussian(rng, N, sigma2)
    return lift_to_real(channel.H_c, y_c, sigma2), lift_vector(x_c)


def run_trace(K: int, N: int, M: int, snr_db: float, n_inits: int = 3, sweeps: int = 0,
              seed: int = 0, oracle_cap: int = DEFAULT_ORACLE_CAP) -> pd.DataFrame:
    """Least cost so far after every sweep, randomized vs plain Gibbs, from shared random starts.

    Both chains run the full sweep budget (``sweeps``, default 8K*sqrt(M))
    without the stalling stop on one channel realization. The ML cost of
    that realization is attached when exhaustive search fits the cap.
    """
    alphabet = build_alphabet(M)
    sigma2 = snr_to_sigma2(snr_db, K, alphabet.Es)
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    sys, _ = _realization(K, N, alphabet, sigma2, rng)
    base = DetectorParams.for_system(K, M)
    params = base.model_copy(update=dict(
        max_iter=sweeps or base.max_iter, stop_on_stall=False, record_trace=True,
    ))

    ml_cost = math.nan
    if alphabet.size ** sys.n_dim <= oracle_cap:
        ml_cost = ml_bruteforce(sys, alphabet, cap=oracle_cap).best_cost

    records = []
    for init in range(n_inits):
        x0 = alphabet.random_levels(rng, sys.n_dim)
        runs = {
            "rmcmc": rmcmc(sys, alphabet, x0, params, rng),
            "conv_mcmc": conventional_mcmc(sys, alphabet, x0, params, rng),
        }
        for name, result in runs.items():
            for sweep, cost in enumerate(result.trace):
                records.append({"init": init, "algorithm": name, "sweep": sweep,
                                "best_cost": cost, "ml_cost": ml_cost})
    return pd.DataFrame.from_records(records, columns=["init", "algorithm", "sweep", "best_cost", "ml_cost"])


def run_phi_histogram(K: int, N: int, M: int, snr_db: float, trials: int, seed: int = 0,
                      bins: int = 40) -> pd.DataFrame:
    """Histogram of the standardized cost of restart-wrapper outputs, split by correct and wrong vectors.

    A vector counts as correct when it equals the transmitted one.
    """
    alphabet = build_alphabet(M)
    sigma2 = snr_to_sigma2(snr_db, K, alphabet.Es)
    params = DetectorParams.for_system(K, M)
    phis, correct = [], []
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, trial]))
        sys, x_true = _realization(K, N, alphabet, sigma2, rng)
        result = rmcmc_with_restarts(sys, alphabet, params, rng)
        phis.append(standardized_cost(result.best_cost, sys.n_obs, sigma2, NoiseStatsMode.PERFECT_CSI))
        correct.append(bool(np.array_equal(result.x_hat, x_true)))

    phis = np.asarray(phis)
    correct = np.asarray(correct, dtype=bool)
    if phis.size == 0:
        return pd.DataFrame(columns=["bin_left", "bin_right", "correct", "incorrect"])
    edges = np.histogram_bin_edges(phis, bins=bins)
    ok, _ = np.histogram(phis[correct], bins=edges)
    bad, _ = np.histogram(phis[~correct], bins=edges)
    logger.info("phi histogram: %d correct, %d incorrect out of %d", ok.sum(), bad.sum(), trials)
    return pd.DataFrame({"bin_left": edges[:-1], "bin_right": edges[1:], "correct": ok, "incorrect": bad})
