from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from system_model.alphabet import ModAlphabet
from system_model.channel import UniformDb, complex_gaussian, generate_flat_channel


@dataclass(frozen=True)
class FrameConfig:
    """Flat-fading frame: one K-use pilot block followed by Q data blocks of K uses.

    Args:
        K: users
        N: receive antennas
        Q: data blocks per frame
        Es: average symbol energy
        p: pilot amplitude, sqrt(K * Es)
    """

    K: int
    N: int
    Q: int
    Es: float
    p: float

    @classmethod
    def build(cls, K: int, N: int, Q: int, alphabet: ModAlphabet) -> "FrameConfig":
        return cls(K=K, N=N, Q=Q, Es=alphabet.Es, p=math.sqrt(K * alphabet.Es))

    @property
    def frame_length(self) -> int:
        return (self.Q + 1) * self.K

    @property
    def pilot_matrix(self) -> np.ndarray:
        return self.p * np.eye(self.K, dtype=complex)


@dataclass(frozen=True, eq=False)
class FlatFrame:
    """One transmitted and received frame.

    ``X`` holds the pilot block in its first K columns; ``noise`` is kept so
    a frame can be written out and replayed exactly.
    """

    config: FrameConfig
    H_c: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    noise: np.ndarray
    sigma2: float

    @property
    def Y_pilot(self) -> np.ndarray:
        return self.Y[:, : self.config.K]

    @property
    def Y_data(self) -> np.ndarray:
        return self.Y[:, self.config.K:]

    @property
    def X_data(self) -> np.ndarray:
        return self.X[:, self.config.K:]


def assemble_flat_frame(config: FrameConfig, H_c: np.ndarray, X_data: np.ndarray,
                        noise: np.ndarray, sigma2: float) -> FlatFrame:
    X = np.hstack([config.pilot_matrix, X_data])
    return FlatFrame(config=config, H_c=H_c, X=X, Y=H_c @ X + noise, noise=noise, sigma2=sigma2)


def generate_flat_frame(config: FrameConfig, alphabet: ModAlphabet, sigma2: float,
                        rng: np.random.Generator, imbalance: Optional[UniformDb] = None) -> FlatFrame:
    channel = generate_flat_channel(config.K, config.N, imbalance, rng)
    levels = alphabet.random_levels(rng, (2, config.K, config.Q * config.K))
    X_data = levels[0] + 1j * levels[1]
    noise = complex_gaussian(rng, (config.N, config.frame_length), sigma2)
    return assemble_flat_frame(config, channel.H_c, X_data, noise, sigma2)


def initial_estimate(Y_P: np.ndarray, p: float) -> np.ndarray:
    """Pilot-only estimate H_c + N_P / p; each entry carries error variance sigma2 / p^2."""
    return Y_P / p
