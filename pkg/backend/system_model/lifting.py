from dataclasses import dataclass

import numpy as np

from errors import DimensionError


def lift_matrix(A_c: np.ndarray) -> np.ndarray:
    """[[Re, -Im], [Im, Re]] real form of a complex matrix."""
    re, im = A_c.real, A_c.imag
    return np.block([[re, -im], [im, re]])


def lift_vector(v_c: np.ndarray) -> np.ndarray:
    return np.concatenate([v_c.real, v_c.imag])


def unlift_vector(v_r: np.ndarray) -> np.ndarray:
    half = v_r.shape[-1] // 2
    return v_r[..., :half] + 1j * v_r[..., half:]


@dataclass(frozen=True, eq=False)
class RealSystem:
    """Real-valued flat model y = Hx + n.

    Args:
        H: 2N x 2K lifted channel
        y: 2N observation
        sigma2: complex noise variance (each real component carries sigma2/2)
        N: receive antennas
        K: users
    """

    H: np.ndarray
    y: np.ndarray
    sigma2: float
    N: int
    K: int

    # detector-facing view shared with the frequency-domain block system
    @property
    def n_obs(self) -> int:
        return self.N

    @property
    def n_rows(self) -> int:
        return 2 * self.N

    @property
    def n_dim(self) -> int:
        return 2 * self.K

    def column(self, i: int) -> np.ndarray:
        return self.H[:, i]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.H @ x

    def apply_batch(self, X: np.ndarray) -> np.ndarray:
        return X @ self.H.T

    def cost(self, x: np.ndarray) -> float:
        return residual_cost(self.H, self.y, x)

    def mmse_soft(self, Es: float) -> np.ndarray:
        gram = self.H.T @ self.H + (self.sigma2 / Es) * np.eye(self.n_dim)
        return np.linalg.solve(gram, self.H.T @ self.y)


def lift_to_real(H_c: np.ndarray, y_c: np.ndarray, sigma2: float = 0.0) -> RealSystem:
    if H_c.ndim != 2 or y_c.ndim != 1 or y_c.shape[0] != H_c.shape[0]:
        raise DimensionError(
            f"channel of shape {H_c.shape} does not match observation of shape {y_c.shape}"
        )
    N, K = H_c.shape
    return RealSystem(H=lift_matrix(H_c), y=lift_vector(y_c), sigma2=float(sigma2), N=N, K=K)


def residual_cost(H: np.ndarray, y: np.ndarray, x: np.ndarray) -> float:
    r = y - H @ x
    return float(r @ r)
