from system_model.alphabet import ModAlphabet, build_alphabet
from system_model.channel import (
    ComplexChannel,
    SnrConvention,
    UniformDb,
    complex_gaussian,
    generate_flat_channel,
    snr_to_sigma2,
)
from system_model.cost import NoiseStatsMode, standardized_cost
from system_model.lifting import (
    RealSystem,
    lift_matrix,
    lift_to_real,
    lift_vector,
    residual_cost,
    unlift_vector,
)
from system_model.mmse import mmse_detect
from system_model.reference import siso_awgn_ber

__all__ = [
    "ModAlphabet",
    "build_alphabet",
    "ComplexChannel",
    "SnrConvention",
    "UniformDb",
    "complex_gaussian",
    "generate_flat_channel",
    "snr_to_sigma2",
    "NoiseStatsMode",
    "standardized_cost",
    "RealSystem",
    "lift_matrix",
    "lift_to_real",
    "lift_vector",
    "residual_cost",
    "unlift_vector",
    "mmse_detect",
    "siso_awgn_ber",
]
