import numpy as np

from system_model.alphabet import ModAlphabet


def mmse_detect(sys, alphabet: ModAlphabet) -> np.ndarray:
    """Regularized least squares with regularizer sigma2/Es, rounded to the PAM grid.

    ``sys`` is any linear system exposing ``mmse_soft``; the flat RealSystem
    solves the 2K normal equations, the frequency-domain block system solves
    one small system per bin.
    """
    return alphabet.nearest(sys.mmse_soft(alphabet.Es))
