from dataclasses import dataclass
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from errors import DimensionError
from system_model.alphabet import ModAlphabet
from system_model.channel import complex_gaussian


@dataclass(frozen=True)
class CpscConfig:
    """Cyclic-prefixed single-carrier frame.

    Args:
        K: users
        N: receive antennas
        L: multipath taps
        I: information symbols per block
        Q: data blocks per frame
        pdp: per-tap average power, one entry per tap
        Es: average symbol energy
        b: pilot amplitude, sqrt(K * Es * sum(pdp))
    """

    K: int
    N: int
    L: int
    I: int
    Q: int
    pdp: Tuple[float, ...]
    Es: float
    b: float

    @classmethod
    def build(cls, K: int, N: int, L: int, I: int, Q: int, alphabet: ModAlphabet,
              pdp: Optional[Sequence[float]] = None) -> "CpscConfig":
        if pdp is None:
            pdp = [1.0 / L] * L
        if len(pdp) != L:
            raise DimensionError(f"power-delay profile has {len(pdp)} entries for L={L} taps")
        if any(v < 0 for v in pdp):
            raise DimensionError("power-delay profile entries must be non-negative")
        if L > I:
            raise DimensionError(f"L={L} taps do not fit in a block of I={I} symbols")
        b = math.sqrt(K * alphabet.Es * float(sum(pdp)))
        return cls(K=K, N=N, L=L, I=I, Q=Q, pdp=tuple(float(v) for v in pdp), Es=alphabet.Es, b=b)

    @property
    def frame_length(self) -> int:
        return (self.L + 1) * self.K + (self.I + self.L - 1) * self.Q - 1

    @property
    def block_length(self) -> int:
        return self.I + self.L - 1


@dataclass(frozen=True, eq=False)
class FreqSelChannel:
    taps: np.ndarray  # N x K x L

    @property
    def N(self) -> int:
        return self.taps.shape[0]

    @property
    def K(self) -> int:
        return self.taps.shape[1]

    @property
    def L(self) -> int:
        return self.taps.shape[2]


def generate_fs_channel(K: int, N: int, pdp: Sequence[float], rng: np.random.Generator) -> FreqSelChannel:
    pdp = np.asarray(pdp, dtype=float)
    taps = complex_gaussian(rng, (N, K, pdp.size)) * np.sqrt(pdp)[None, None, :]
    return FreqSelChannel(taps=taps)


def multipath(taps: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Sum over users of the linear convolution of each user's samples with its taps, truncated to len(x)."""
    N, _, L = taps.shape
    T = x.shape[1]
    out = np.zeros((N, T), dtype=complex)
    for l in range(min(L, T)):
        out[:, l:] += taps[:, :, l] @ x[:, : T - l]
    return out


def build_pilot_sequences(K: int, L: int, b: float) -> np.ndarray:
    """K x KL matrix; user k transmits b at position kL and zeros elsewhere."""
    pilots = np.zeros((K, K * L), dtype=complex)
    pilots[np.arange(K), np.arange(K) * L] = b
    return pilots


def simulate_pilot_phase(channel: FreqSelChannel, b: float, noise: np.ndarray) -> np.ndarray:
    pilots = build_pilot_sequences(channel.K, channel.L, b)
    return multipath(channel.taps, pilots) + noise


def initial_fs_estimate(Y_P: np.ndarray, b: float, K: int, L: int) -> np.ndarray:
    """Taps straight from the staggered pilot impulses; per-tap error variance sigma2 / b^2."""
    return (Y_P / b).reshape(Y_P.shape[0], K, L)


def add_cyclic_prefix(x: np.ndarray, L: int) -> np.ndarray:
    if L <= 1:
        return x.copy()
    return np.concatenate([x[:, -(L - 1):], x], axis=1)


def remove_cyclic_prefix(block: np.ndarray, L: int) -> np.ndarray:
    return block[..., L - 1:]


def simulate_block(channel: FreqSelChannel, x_cp: np.ndarray, sigma2: float,
                   rng: Optional[np.random.Generator] = None,
                   noise: Optional[np.ndarray] = None) -> np.ndarray:
    """Received N x (I+L-1) block for CP-carrying data; the first L-1 samples hold the prefix."""
    if noise is None:
        noise = complex_gaussian(rng, (channel.N, x_cp.shape[1]), sigma2)
    return multipath(channel.taps, x_cp) + noise


@dataclass(frozen=True, eq=False)
class CpscFrame:
    config: CpscConfig
    channel: FreqSelChannel
    data: np.ndarray  # Q x K x I
    pilot_rx: np.ndarray  # N x KL
    received: np.ndarray  # Q x N x (I+L-1)
    pilot_noise: np.ndarray
    block_noise: np.ndarray
    sigma2: float


def assemble_cpsc_frame(config: CpscConfig, channel: FreqSelChannel, data: np.ndarray,
                        pilot_noise: np.ndarray, block_noise: np.ndarray, sigma2: float) -> CpscFrame:
    pilot_rx = simulate_pilot_phase(channel, config.b, pilot_noise)
    received = np.stack([
        simulate_block(channel, add_cyclic_prefix(data[q], config.L), sigma2, noise=block_noise[q])
        for q in range(config.Q)
    ]) if config.Q else np.zeros((0, config.N, config.block_length), dtype=complex)
    return CpscFrame(config=config, channel=channel, data=data, pilot_rx=pilot_rx, received=received,
                     pilot_noise=pilot_noise, block_noise=block_noise, sigma2=sigma2)


def generate_cpsc_frame(config: CpscConfig, alphabet: ModAlphabet, sigma2: float,
                        rng: np.random.Generator) -> CpscFrame:
    channel = generate_fs_channel(config.K, config.N, config.pdp, rng)
    levels = alphabet.random_levels(rng, (2, config.Q, config.K, config.I))
    data = levels[0] + 1j * levels[1]
    pilot_noise = complex_gaussian(rng, (config.N, config.K * config.L), sigma2)
    block_noise = complex_gaussian(rng, (config.Q, config.N, config.block_length), sigma2)
    return assemble_cpsc_frame(config, channel, data, pilot_noise, block_noise, sigma2)
