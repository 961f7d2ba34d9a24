import logging
import math
from typing import List

import numpy as np

from detect.conventional import conventional_mcmc
from detect.gibbs import column_norms
from detect.params import DetectorParams, DetectorResult, OpCounter
from detect.rmcmc import rmcmc
from system_model.alphabet import ModAlphabet
from system_model.cost import NoiseStatsMode, standardized_cost
from system_model.mmse import mmse_detect

logger = logging.getLogger(__name__)


def required_repetitions(phi: float, params: DetectorParams) -> int:
    scaled = params.c2 * phi if params.c2 > 0.0 else 0.0
    # more than R_max repetitions can never be observed
    return int(math.floor(min(max(0.0, scaled), float(params.R_max)))) + 1


def mmse_ops(n_rows: int, n_dim: int) -> int:
    """Gram matrix, matched filter, Cholesky-class solve and rounding."""
    return 2 * n_rows * n_dim * n_dim + 2 * n_rows * n_dim + (2 * n_dim ** 3) // 3 + 2 * n_dim ** 2 + 2 * n_dim


def rmcmc_with_restarts(
    sys,
    alphabet: ModAlphabet,
    params: DetectorParams,
    rng: np.random.Generator,
    mode: NoiseStatsMode = NoiseStatsMode.PERFECT_CSI,
    base: str = "rmcmc",
) -> DetectorResult:
    """Restart a base chain until its best vector has repeated often enough.

    The first restart starts from the MMSE decision, later ones from uniform
    random vectors. After each restart the least-cost vector so far is
    counted against every restart output; the run ends once that count
    reaches ``required_repetitions`` of its standardized cost, or at
    ``R_max`` restarts. With ``fixed_restarts`` set the repetition test is
    skipped and exactly that many restarts run. ``base="conventional"``
    wraps plain Gibbs instead of the randomized chain.
    """
    ops = OpCounter(mmse_ops(sys.n_rows, sys.n_dim))
    norms = column_norms(sys, ops)
    x_start = mmse_detect(sys, alphabet)
    budget = params.fixed_restarts or params.R_max

    outputs: List[np.ndarray] = []
    restart_costs: List[float] = []
    best = None
    sweeps = 0
    trace = [] if params.record_trace else None

    for restart in range(budget):
        x0 = x_start if restart == 0 else alphabet.random_levels(rng, sys.n_dim)
        if base == "conventional":
            run = conventional_mcmc(sys, alphabet, x0, params, rng, norms=norms)
        else:
            run = rmcmc(sys, alphabet, x0, params, rng, mode, norms=norms)
        ops.add(run.real_ops)
        sweeps += run.sweeps_used
        outputs.append(run.x_hat)
        restart_costs.append(run.best_cost)
        if trace is not None:
            trace.extend(run.trace)

        if best is None or run.best_cost < best.best_cost:
            best = run
        ops.add(1)

        if params.fixed_restarts is not None:
            continue
        repeats = sum(1 for x in outputs if np.array_equal(x, best.x_hat))
        ops.add(len(outputs) * sys.n_dim)
        phi = standardized_cost(best.best_cost, sys.n_obs, sys.sigma2, mode)
        if repeats >= required_repetitions(phi, params):
            break

    logger.debug("restart wrapper used %d restarts, best cost %.4g", len(outputs), best.best_cost)
    return DetectorResult(
        x_hat=best.x_hat,
        best_cost=best.best_cost,
        sweeps_used=sweeps,
        restarts_used=len(outputs),
        real_ops=ops.total,
        trace=trace,
        restart_costs=restart_costs,
    )
