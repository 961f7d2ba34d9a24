"""Linear-Gaussian models the Gibbs channel estimator runs on.

A model exposes ``n_coef``, ``initial_residual(g)``, ``correlate(res, i)``,
``update_residual(res, i, delta)``, ``column_norm2(i)`` and ``prior_var(i)``.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from errors import DimensionError
from system_model.lifting import lift_matrix


@dataclass(frozen=True, eq=False)
class VectorizedModel:
    """Full-frame model Y = H X + W in lifted real form, solved for g = vec of H row by row.

    Coordinate n of g is H_lift[p, q] with n = 2K * p + q (0-based), and the
    observation is the lifted Y flattened row by row. The structured operator
    I_2N kron X_lift^T is applied through ``G @ X_lift``; nothing of size
    (observations x coefficients) is ever built.

    Args:
        Y_lift: 2N x 2T lifted observation
        X_lift: 2K x 2T lifted transmit matrix (pilots plus detected data)
    """

    Y_lift: np.ndarray
    X_lift: np.ndarray
    row_norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "row_norms", np.einsum("ij,ij->i", self.X_lift, self.X_lift))

    @property
    def n_out(self) -> int:
        return self.Y_lift.shape[0]

    @property
    def n_in(self) -> int:
        return self.X_lift.shape[0]

    @property
    def n_coef(self) -> int:
        return self.n_out * self.n_in

    @property
    def r(self) -> np.ndarray:
        return self.Y_lift.reshape(-1)

    def coordinate(self, i: int):
        return divmod(i, self.n_in)

    def apply(self, g: np.ndarray) -> np.ndarray:
        return (g.reshape(self.n_out, self.n_in) @ self.X_lift).reshape(-1)

    def column(self, i: int) -> np.ndarray:
        """Dense column i of the operator; for checks on small frames only."""
        p, q = self.coordinate(i)
        col = np.zeros_like(self.Y_lift)
        col[p] = self.X_lift[q]
        return col.reshape(-1)

    def column_norm2(self, i: int) -> float:
        return float(self.row_norms[i % self.n_in])

    def prior_var(self, i: int) -> float:
        return 0.5

    def initial_residual(self, g: np.ndarray) -> np.ndarray:
        return self.Y_lift - g.reshape(self.n_out, self.n_in) @ self.X_lift

    def correlate(self, residual: np.ndarray, i: int) -> float:
        p, q = self.coordinate(i)
        return float(residual[p] @ self.X_lift[q])

    def update_residual(self, residual: np.ndarray, i: int, delta: float) -> None:
        p, q = self.coordinate(i)
        residual[p] -= delta * self.X_lift[q]


@dataclass(frozen=True, eq=False)
class DenseLinearModel:
    """z = A g + w with an explicit real design matrix and optional per-coefficient prior variances."""

    A: np.ndarray
    z: np.ndarray
    prior: Optional[np.ndarray] = None
    col_norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.A.shape[0] != self.z.shape[0]:
            raise DimensionError(f"design matrix {self.A.shape} does not match observation {self.z.shape}")
        object.__setattr__(self, "col_norms", np.einsum("ij,ij->j", self.A, self.A))

    @property
    def n_coef(self) -> int:
        return self.A.shape[1]

    def apply(self, g: np.ndarray) -> np.ndarray:
        return self.A @ g

    def column_norm2(self, i: int) -> float:
        return float(self.col_norms[i])

    def prior_var(self, i: int) -> float:
        return 0.5 if self.prior is None else float(self.prior[i])

    def initial_residual(self, g: np.ndarray) -> np.ndarray:
        return self.z - self.A @ g

    def correlate(self, residual: np.ndarray, i: int) -> float:
        return float(self.A[:, i] @ residual)

    def update_residual(self, residual: np.ndarray, i: int, delta: float) -> None:
        residual -= delta * self.A[:, i]


def vectorize_frame(Y_tot: np.ndarray, X_hat_tot: np.ndarray) -> VectorizedModel:
    if Y_tot.ndim != 2 or X_hat_tot.ndim != 2 or Y_tot.shape[1] != X_hat_tot.shape[1]:
        raise DimensionError(
            f"observation {Y_tot.shape} and transmit matrix {X_hat_tot.shape} disagree on frame length"
        )
    return VectorizedModel(Y_lift=lift_matrix(Y_tot), X_lift=lift_matrix(X_hat_tot))


def channel_to_g(H_c: np.ndarray) -> np.ndarray:
    return lift_matrix(H_c).reshape(-1)


def g_to_channel(g: np.ndarray, N: int, K: int) -> np.ndarray:
    """Complex channel from g, averaging the two lifted copies of each real and imaginary part."""
    G = g.reshape(2 * N, 2 * K)
    re = 0.5 * (G[:N, :K] + G[N:, K:])
    im = 0.5 * (G[N:, :K] - G[:N, K:])
    return re + 1j * im
