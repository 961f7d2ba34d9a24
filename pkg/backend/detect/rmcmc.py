import logging
import math
from typing import Optional

import numpy as np

from detect.gibbs import GibbsChain
from detect.params import DetectorParams, DetectorResult, OpCounter
from system_model.alphabet import ModAlphabet
from system_model.cost import NoiseStatsMode, standardized_cost

logger = logging.getLogger(__name__)


def stalling_limit(phi: float, params: DetectorParams) -> int:
    """Extra sweeps allowed after a stall: ceil(max(c_min, c1 * exp(phi))), capped at max_iter on overflow."""
    try:
        grown = params.c1 * math.exp(phi)
    except OverflowError:
        return max(params.max_iter, params.c_min)
    if math.isinf(grown):
        return max(params.max_iter, params.c_min)
    return int(math.ceil(max(params.c_min, grown)))


def rmcmc(
    sys,
    alphabet: ModAlphabet,
    x0: np.ndarray,
    params: DetectorParams,
    rng: np.random.Generator,
    mode: NoiseStatsMode = NoiseStatsMode.PERFECT_CSI,
    norms: Optional[np.ndarray] = None,
) -> DetectorResult:
    """Randomized Gibbs detection with the dynamic stalling stop.

    Each sweep draws one coordinate uniformly; that coordinate is resampled
    from a random pmf and all others from their Gibbs conditionals. With
    ``randomize_each_coordinate`` every coordinate instead flips an
    independent 1/(2K) coin.
    """
    ops = OpCounter()
    n = sys.n_dim
    chain = GibbsChain(sys, alphabet, x0, params.alpha, ops, norms)
    z = chain.x.copy()
    beta = chain.cost()
    trace = [beta] if params.record_trace else None
    last_improvement = 0
    t = 0

    while t < params.max_iter:
        if params.randomize_each_coordinate:
            randomized = rng.random(n) < 1.0 / n
        else:
            randomized = np.zeros(n, dtype=bool)
            randomized[rng.integers(n)] = True

        for i in range(n):
            if randomized[i]:
                chain.random_update(i, rng, params.neighbor_restricted_random)
            else:
                chain.gibbs_update(i, rng)
        t += 1
        if t % params.refresh_every == 0:
            chain.refresh()

        gamma = chain.cost()
        ops.add(2)
        if gamma <= beta + chain.tol:
            if gamma < beta - chain.tol:
                last_improvement = t
            z = chain.x.copy()
            beta = min(beta, gamma)
        if trace is not None:
            trace.append(beta)

        if params.stop_on_stall and last_improvement < t:
            phi = standardized_cost(beta, sys.n_obs, sys.sigma2, mode)
            theta = stalling_limit(phi, params)
            ops.add(8)
            if theta < t and t - last_improvement >= theta:
                logger.debug("stalled at sweep %d (phi=%.3f, limit=%d)", t, phi, theta)
                break

    return DetectorResult(
        x_hat=z,
        best_cost=sys.cost(z),
        sweeps_used=t,
        restarts_used=1,
        real_ops=ops.total,
        trace=trace,
        random_updates=chain.random_updates,
    )
