from enum import Enum
import math


class NoiseStatsMode(str, Enum):
    """Statistics assumed for the residual of an error-free solution."""

    PERFECT_CSI = "perfect_csi"  # per complex dimension variance sigma2
    PILOT_CSI = "pilot_csi"  # estimation error doubles it to 2*sigma2


def standardized_cost(cost: float, n_obs: int, sigma2: float, mode: NoiseStatsMode) -> float:
    """Distance of a residual cost from the error-free chi-squared mean, in standard deviations."""
    var = 2.0 * sigma2 if mode == NoiseStatsMode.PILOT_CSI else sigma2
    if var <= 0.0:
        # noiseless: any residual at all is infinitely unlikely
        return -math.inf if cost <= 0.0 else math.inf
    return (cost - n_obs * var) / (math.sqrt(n_obs) * var)
