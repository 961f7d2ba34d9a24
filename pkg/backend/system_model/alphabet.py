from dataclasses import dataclass, field
import math

import numpy as np

from errors import UnsupportedModulationError

SUPPORTED_ORDERS = (4, 16, 64)


@dataclass(frozen=True, eq=False)
class ModAlphabet:
    """Square QAM alphabet expressed through its underlying PAM levels.

    Args:
        M: QAM order
        pam: odd-integer PAM levels, strictly increasing
        Es: average complex symbol energy, 2(M-1)/3
    """

    M: int
    pam: np.ndarray
    Es: float
    gray: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.pam.size

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(self.M))

    @property
    def bits_per_level(self) -> int:
        return self.bits_per_symbol // 2

    @property
    def step(self) -> float:
        return 2.0

    def index_of(self, levels: np.ndarray) -> np.ndarray:
        """PAM index of each level (levels must belong to the alphabet)."""
        idx = (np.asarray(levels) + (self.size - 1)) / 2
        return np.rint(idx).astype(np.int64)

    def nearest(self, values: np.ndarray) -> np.ndarray:
        # odd-integer grid; half-way points go to the smaller level
        levels = 2.0 * np.ceil(np.asarray(values, dtype=float) / 2.0) - 1.0
        return np.clip(levels, self.pam[0], self.pam[-1])

    def random_levels(self, rng: np.random.Generator, size) -> np.ndarray:
        return self.pam[rng.integers(self.size, size=size)]

    def bit_errors(self, x_hat: np.ndarray, x_true: np.ndarray) -> int:
        """Gray-coded bit errors between two real level vectors."""
        diff = self.gray[self.index_of(x_hat)] ^ self.gray[self.index_of(x_true)]
        return int(np.unpackbits(diff.astype(np.uint8)[..., None], axis=-1).sum())


def build_alphabet(M: int) -> ModAlphabet:
    if M not in SUPPORTED_ORDERS:
        raise UnsupportedModulationError(
            f"QAM order {M} is not supported; choose one of {SUPPORTED_ORDERS}"
        )
    root = math.isqrt(M)
    pam = np.arange(-(root - 1), root, 2, dtype=float)
    idx = np.arange(root)
    return ModAlphabet(M=M, pam=pam, Es=2.0 * (M - 1) / 3.0, gray=idx ^ (idx >> 1))
