import math

import numpy as np
from scipy.special import erfc

from system_model.alphabet import SUPPORTED_ORDERS
from errors import UnsupportedModulationError


def siso_awgn_ber(M: int, snr_db):
    """Exact bit error rate of Gray-coded square M-QAM over AWGN.

    ``snr_db`` is the average symbol SNR Es/sigma2 and may be a scalar or an
    array. The per-bit-position sum keeps the curve exact at low SNR, so it
    tends to 0.5 there and to 0 at high SNR.
    """
    if M not in SUPPORTED_ORDERS:
        raise UnsupportedModulationError(f"QAM order {M} is not supported")
    root = math.isqrt(M)
    n_bits = int(math.log2(root))
    snr = 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)
    scale = np.sqrt(3.0 * snr / (2.0 * (M - 1)))

    total = np.zeros_like(snr)
    for k in range(1, n_bits + 1):
        weight = 2 ** (k - 1)
        upper = int((1 - 2.0 ** (-k)) * root)
        for i in range(upper):
            sign = (-1) ** ((i * weight) // root)
            coef = weight - math.floor(i * weight / root + 0.5)
            total = total + sign * coef * erfc((2 * i + 1) * scale)
    ber = total / (root * n_bits)
    return float(ber) if np.ndim(ber) == 0 else ber
