from dataclasses import dataclass, field
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class GibbsEstimatorState:
    """Sampler state for the channel coefficients.

    Args:
        model: linear model (see chanest.vectorized)
        g_hat: current sample
        g_star: running weighted estimate
        weight_sums: per-coefficient sum of sample weights
        residual: observation minus the model applied to g_hat
        history: per sweep (samples, weights), kept only on request
    """

    model: object
    g_hat: np.ndarray
    g_star: np.ndarray
    weight_sums: np.ndarray
    residual: np.ndarray
    history: Optional[List[Tuple[np.ndarray, np.ndarray]]] = field(default=None, repr=False)

    @classmethod
    def start(cls, model, g0: np.ndarray, keep_history: bool = False) -> "GibbsEstimatorState":
        g_hat = np.array(g0, dtype=float, copy=True)
        return cls(
            model=model,
            g_hat=g_hat,
            g_star=g_hat.copy(),
            weight_sums=np.zeros_like(g_hat),
            residual=model.initial_residual(g_hat),
            history=[] if keep_history else None,
        )


def gibbs_conditional_params(state: GibbsEstimatorState, i: int, sigma2: float,
                             augmented: bool = True) -> Tuple[float, float]:
    """Mean and variance of coefficient i given all others.

    The prior exp(-g^2 / (2v)) is folded in as one extra observation row of
    weight sigma2 / (2v) (that is sigma2 for the unit-power prior v = 1/2).
    ``augmented=False`` keeps that row in the mean but uses only the column
    energy in the variance. A coefficient with zero prior variance is a point
    mass at 0.
    """
    model = state.model
    prior_var = model.prior_var(i)
    if prior_var <= 0.0:
        return 0.0, 0.0
    s_norm2 = model.column_norm2(i)
    corr = model.correlate(state.residual, i) + state.g_hat[i] * s_norm2
    aug = sigma2 / (2.0 * prior_var)
    denom = s_norm2 + aug
    if denom <= 0.0:
        return 0.0, prior_var
    mean = corr / denom
    if augmented:
        return mean, sigma2 / (2.0 * denom)
    if s_norm2 <= 0.0:
        return 0.0, prior_var
    return mean, sigma2 / (2.0 * s_norm2)


def gibbs_estimator_run(model, sigma2: float, g0: np.ndarray, MAX: int,
                        rng: np.random.Generator, augmented: bool = True,
                        keep_history: bool = False) -> GibbsEstimatorState:
    """Run MAX coordinate sweeps and return the full sampler state."""
    state = GibbsEstimatorState.start(model, g0, keep_history)
    n = model.n_coef
    for sweep in range(MAX):
        samples = np.empty(n) if keep_history else None
        weights = np.empty(n) if keep_history else None
        for i in range(n):
            mean, var = gibbs_conditional_params(state, i, sigma2, augmented)
            draw = rng.standard_normal()
            sample = mean + math.sqrt(max(var, 0.0)) * draw
            # weight exp(-(sample - mean)^2 / (2 var)) written in terms of the standard draw
            alpha = math.exp(-0.5 * draw * draw) if var > 0.0 else 1.0

            total = state.weight_sums[i] + alpha
            state.g_star[i] = (state.weight_sums[i] * state.g_star[i] + alpha * sample) / total
            state.weight_sums[i] = total

            delta = sample - state.g_hat[i]
            if delta != 0.0:
                model.update_residual(state.residual, i, delta)
                state.g_hat[i] = sample
            if keep_history:
                samples[i] = sample
                weights[i] = alpha
        if keep_history:
            state.history.append((samples, weights))
        logger.debug("channel sweep %d done over %d coefficients", sweep + 1, n)
    return state


def gibbs_channel_estimate(model, sigma2: float, g0: np.ndarray, MAX: int = 2,
                           rng: Optional[np.random.Generator] = None,
                           augmented: bool = True) -> np.ndarray:
    rng = rng if rng is not None else np.random.default_rng()
    return gibbs_estimator_run(model, sigma2, g0, MAX, rng, augmented).g_star
