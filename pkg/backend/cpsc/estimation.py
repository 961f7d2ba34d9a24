import logging
from typing import Optional, Sequence

import numpy as np
from scipy import fft as sfft

from chanest.gibbs_estimator import gibbs_channel_estimate
from chanest.vectorized import DenseLinearModel
from system_model.lifting import lift_matrix, lift_vector, unlift_vector

logger = logging.getLogger(__name__)


def data_phase_design(detected: np.ndarray, L: int) -> np.ndarray:
    """Complex (Q*I) x (K*L) matrix mapping one antenna's taps to its frequency observations.

    Row (q, f), column (k, l) is bhat_q^k[f] * exp(-2j pi f l / I), with bhat
    the unitary DFT of the detected block and the exponential the first L
    columns of the plain DFT matrix.
    """
    Q, K, I = detected.shape
    B = sfft.fft(detected, axis=-1, norm="ortho")
    F_tall = np.exp(-2j * np.pi * np.outer(np.arange(I), np.arange(L)) / I)
    return np.einsum("qkf,fl->qfkl", B, F_tall).reshape(Q * I, K * L)


def estimate_fs_channel_data_phase(
    Zbar_blocks: np.ndarray,
    detected: np.ndarray,
    taps0: np.ndarray,
    sigma2: float,
    MAX: int,
    rng: np.random.Generator,
    pdp: Optional[Sequence[float]] = None,
    augmented: bool = True,
) -> np.ndarray:
    """Refine N x K x L taps antenna by antenna with the Gibbs estimator.

    Args:
        Zbar_blocks: Q x I x N frequency observations
        detected: Q x K x I detected time-domain symbols
        taps0: starting taps, normally the pilot estimate
        pdp: tap powers; each real part gets prior variance pdp[l] / 2
    """
    N, K, L = taps0.shape
    A_r = lift_matrix(data_phase_design(detected, L))
    prior = None
    if pdp is not None:
        per_tap = np.tile(np.asarray(pdp, dtype=float) / 2.0, K)
        prior = np.concatenate([per_tap, per_tap])

    taps = np.empty_like(taps0)
    for j in range(N):
        z_r = lift_vector(Zbar_blocks[:, :, j].reshape(-1))
        model = DenseLinearModel(A=A_r, z=z_r, prior=prior)
        g0 = lift_vector(taps0[j].reshape(-1))
        g_star = gibbs_channel_estimate(model, sigma2, g0, MAX, rng, augmented)
        taps[j] = unlift_vector(g_star).reshape(K, L)
    logger.debug("refined taps for %d antennas from %d blocks", N, detected.shape[0])
    return taps
