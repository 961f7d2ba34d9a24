from enum import Enum
from typing import Optional

import numpy as np

from chanest.frame import FrameConfig
from errors import SingularFrameError


class CrlbMode(str, Enum):
    PILOT_ONLY = "pilot_only"
    FULL_FRAME = "full_frame"


def crlb_mse(frame: FrameConfig, sigma2: float, mode: CrlbMode,
             X: Optional[np.ndarray] = None) -> float:
    """Cramer-Rao bound on the per-coefficient MSE of an unbiased channel estimate.

    Each receive antenna sees one row of H through y = h X + n, so the bound
    per coefficient is sigma2 * tr((X X^H)^-1) / K. Pilot-only uses the
    scaled-identity pilot block. Full-frame uses ``X`` (pilots plus known
    data) when given, else the orthogonal equal-energy value.
    """
    mode = CrlbMode(mode)
    if mode == CrlbMode.PILOT_ONLY:
        return sigma2 / (frame.K * frame.Es)
    if X is None:
        return sigma2 / ((frame.Q + 1) * frame.K * frame.Es)

    gram = X @ X.conj().T
    if np.linalg.matrix_rank(gram) < gram.shape[0]:
        raise SingularFrameError(f"transmit matrix of shape {X.shape} has a singular Gram matrix")
    return float(sigma2 * np.trace(np.linalg.inv(gram)).real / frame.K)
