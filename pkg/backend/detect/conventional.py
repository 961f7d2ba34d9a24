import logging
from typing import Iterator, Optional

import numpy as np

from detect.gibbs import GibbsChain
from detect.params import DetectorParams, DetectorResult, OpCounter
from system_model.alphabet import ModAlphabet

logger = logging.getLogger(__name__)


def gibbs_sweeps(sys, alphabet: ModAlphabet, x0: np.ndarray, alpha: float,
                 rng: np.random.Generator) -> Iterator[np.ndarray]:
    """Endless pure Gibbs chain; yields a copy of the state after every full sweep."""
    chain = GibbsChain(sys, alphabet, x0, alpha, OpCounter())
    t = 0
    while True:
        for i in range(sys.n_dim):
            chain.gibbs_update(i, rng)
        t += 1
        if t % 64 == 0:
            chain.refresh()
        yield chain.x.copy()


def conventional_mcmc(sys, alphabet: ModAlphabet, x0: np.ndarray, params: DetectorParams,
                      rng: np.random.Generator, norms: Optional[np.ndarray] = None) -> DetectorResult:
    """Plain Gibbs detection for ``max_iter`` sweeps, returning the least-cost vector visited."""
    ops = OpCounter()
    chain = GibbsChain(sys, alphabet, x0, params.alpha, ops, norms)
    z = chain.x.copy()
    beta = chain.cost()
    trace = [beta] if params.record_trace else None

    for t in range(1, params.max_iter + 1):
        for i in range(sys.n_dim):
            chain.gibbs_update(i, rng)
        if t % params.refresh_every == 0:
            chain.refresh()
        gamma = chain.cost()
        ops.add(1)
        if gamma <= beta + chain.tol:
            z = chain.x.copy()
            beta = min(beta, gamma)
        if trace is not None:
            trace.append(beta)

    logger.debug("conventional MCMC finished %d sweeps, best cost %.4g", params.max_iter, beta)
    return DetectorResult(
        x_hat=z,
        best_cost=sys.cost(z),
        sweeps_used=params.max_iter,
        restarts_used=1,
        real_ops=ops.total,
        trace=trace,
    )
