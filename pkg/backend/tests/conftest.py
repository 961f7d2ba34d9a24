import numpy as np
import pytest

from system_model.alphabet import build_alphabet
from system_model.channel import complex_gaussian, generate_flat_channel, snr_to_sigma2
from system_model.lifting import lift_to_real, lift_vector


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def qam4():
    return build_alphabet(4)


@pytest.fixture
def qam16():
    return build_alphabet(16)


def flat_realization(K, N, alphabet, snr_db, rng):
    """One flat perfect-CSI realization: (lifted system, transmitted real vector)."""
    sigma2 = snr_to_sigma2(snr_db, K, alphabet.Es)
    channel = generate_flat_channel(K, N, None, rng)
    levels = alphabet.random_levels(rng, (2, K))
    x_c = levels[0] + 1j * levels[1]
    y_c = channel.H_c @ x_c + complex_gaussian(rng, N, sigma2)
    return lift_to_real(channel.H_c, y_c, sigma2), lift_vector(x_c)
