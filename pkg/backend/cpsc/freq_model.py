"""Frequency-domain view of one CP-removed block.

DFTs of data and observations use the unitary (ortho) scaling so noise keeps
its statistics; the per-bin channel is the plain DFT of the zero-padded taps,
the eigenvalues of each circulant channel matrix.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft

from errors import DimensionError
from system_model.lifting import lift_vector


@dataclass(frozen=True, eq=False)
class FreqDomainModel:
    """Per-bin channel matrices Dbar[f] (N x K) for f = 0..I-1."""

    Dbar: np.ndarray
    sigma2: float

    @property
    def I(self) -> int:
        return self.Dbar.shape[0]

    @property
    def N(self) -> int:
        return self.Dbar.shape[1]

    @property
    def K(self) -> int:
        return self.Dbar.shape[2]


def build_freq_model(taps: np.ndarray, I: int, sigma2: float) -> FreqDomainModel:
    if taps.ndim != 3:
        raise DimensionError(f"taps must be N x K x L, got shape {taps.shape}")
    if taps.shape[2] > I:
        raise DimensionError(f"{taps.shape[2]} taps exceed the block length I={I}")
    D = sfft.fft(taps, n=I, axis=2)
    return FreqDomainModel(Dbar=np.ascontiguousarray(np.transpose(D, (2, 0, 1))), sigma2=float(sigma2))


def to_frequency(block: np.ndarray) -> np.ndarray:
    """N x I CP-removed time block -> I x N frequency observations."""
    return sfft.fft(block, axis=-1, norm="ortho").swapaxes(-1, -2)


@dataclass(frozen=True, eq=False)
class CpscBlockSystem:
    """One block as a real linear system over all K*I symbols.

    Real coordinates are [Re xbar; Im xbar] with xbar ordered time-major,
    user-minor (index m*K + k); observations are [Re zbar; Im zbar] ordered
    bin-major, antenna-minor. Products go through FFTs and per-bin
    multiplies; single columns are built on demand for the Gibbs updates.
    """

    model: FreqDomainModel
    Zbar: np.ndarray  # I x N
    y: np.ndarray = field(init=False)
    phases: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        I = self.model.I
        grid = np.outer(np.arange(I), np.arange(I))
        object.__setattr__(self, "y", lift_vector(self.Zbar.reshape(-1)))
        object.__setattr__(self, "phases", np.exp(-2j * np.pi * grid / I) / np.sqrt(I))

    @property
    def sigma2(self) -> float:
        return self.model.sigma2

    @property
    def n_obs(self) -> int:
        return self.model.N * self.model.I

    @property
    def n_rows(self) -> int:
        return 2 * self.n_obs

    @property
    def n_dim(self) -> int:
        return 2 * self.model.K * self.model.I

    def _to_time_major(self, x: np.ndarray) -> np.ndarray:
        half = self.model.K * self.model.I
        xc = x[..., :half] + 1j * x[..., half:]
        return xc.reshape(x.shape[:-1] + (self.model.I, self.model.K))

    def column(self, i: int) -> np.ndarray:
        half = self.model.K * self.model.I
        m, k = divmod(i % half, self.model.K)
        c = (self.model.Dbar[:, :, k] * self.phases[:, m][:, None]).reshape(-1)
        if i < half:
            return np.concatenate([c.real, c.imag])
        return np.concatenate([-c.imag, c.real])

    def apply(self, x: np.ndarray) -> np.ndarray:
        B = sfft.fft(self._to_time_major(x), axis=0, norm="ortho")
        Z = np.einsum("fnk,fk->fn", self.model.Dbar, B)
        return lift_vector(Z.reshape(-1))

    def apply_batch(self, X: np.ndarray) -> np.ndarray:
        B = sfft.fft(self._to_time_major(X), axis=1, norm="ortho")
        Z = np.einsum("fnk,bfk->bfn", self.model.Dbar, B).reshape(X.shape[0], -1)
        return np.concatenate([Z.real, Z.imag], axis=1)

    def cost(self, x: np.ndarray) -> float:
        r = self.y - self.apply(x)
        return float(r @ r)

    def mmse_soft(self, Es: float) -> np.ndarray:
        D = self.model.Dbar
        lam = self.sigma2 / Es
        gram = np.einsum("fnk,fnj->fkj", D.conj(), D) + lam * np.eye(self.model.K)[None]
        rhs = np.einsum("fnk,fn->fk", D.conj(), self.Zbar)
        B_hat = np.linalg.solve(gram, rhs[..., None])[..., 0]
        X_hat = sfft.ifft(B_hat, axis=0, norm="ortho")
        return lift_vector(X_hat.reshape(-1))

    def dense(self) -> np.ndarray:
        """Full 2NI x 2KI matrix; only meant for checks on small blocks."""
        return np.stack([self.column(i) for i in range(self.n_dim)], axis=1)
