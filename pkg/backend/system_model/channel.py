from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from errors import DimensionError


class SnrConvention(str, Enum):
    """How an SNR axis value maps to the complex noise variance."""

    PER_ANTENNA = "per_antenna"  # K*Es / sigma2
    PER_USER = "per_user"  # Es / sigma2


@dataclass(frozen=True)
class UniformDb:
    lo: float
    hi: float


@dataclass(frozen=True, eq=False)
class ComplexChannel:
    """Flat-fading uplink channel.

    Args:
        H_c: N x K complex gains, column k scaled by sqrt(sigma_k2[k])
        sigma_k2: per-user received power, sums to K
    """

    H_c: np.ndarray
    sigma_k2: np.ndarray

    @property
    def N(self) -> int:
        return self.H_c.shape[0]

    @property
    def K(self) -> int:
        return self.H_c.shape[1]


def complex_gaussian(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def user_powers(K: int, imbalance: Optional[UniformDb], rng: np.random.Generator) -> np.ndarray:
    if imbalance is None:
        return np.ones(K)
    if imbalance.lo > imbalance.hi:
        raise DimensionError(f"imbalance range [{imbalance.lo}, {imbalance.hi}] is empty")
    powers = 10.0 ** (rng.uniform(imbalance.lo, imbalance.hi, size=K) / 10.0)
    return powers * (K / powers.sum())


def generate_flat_channel(
    K: int, N: int, imbalance: Optional[UniformDb], rng: np.random.Generator
) -> ComplexChannel:
    if K > N:
        raise DimensionError(f"K={K} users exceeds N={N} receive antennas")
    sigma_k2 = user_powers(K, imbalance, rng)
    H_c = complex_gaussian(rng, (N, K)) * np.sqrt(sigma_k2)[None, :]
    return ComplexChannel(H_c=H_c, sigma_k2=sigma_k2)


def snr_to_sigma2(
    snr_db: float, K: int, Es: float, convention: SnrConvention = SnrConvention.PER_ANTENNA
) -> float:
    linear = 10.0 ** (snr_db / 10.0)
    if convention == SnrConvention.PER_USER:
        return Es / linear
    return K * Es / linear
