from cpsc.channel import (
    CpscConfig,
    CpscFrame,
    FreqSelChannel,
    add_cyclic_prefix,
    assemble_cpsc_frame,
    build_pilot_sequences,
    generate_cpsc_frame,
    generate_fs_channel,
    initial_fs_estimate,
    multipath,
    remove_cyclic_prefix,
    simulate_block,
    simulate_pilot_phase,
)
from cpsc.equalize import block_levels, block_symbols, equalize_block
from cpsc.estimation import data_phase_design, estimate_fs_channel_data_phase
from cpsc.freq_model import CpscBlockSystem, FreqDomainModel, build_freq_model, to_frequency
from cpsc.iterative import equalize_frame, iterate_cpsc_estimation_detection

__all__ = [
    "CpscConfig",
    "CpscFrame",
    "FreqSelChannel",
    "add_cyclic_prefix",
    "assemble_cpsc_frame",
    "build_pilot_sequences",
    "generate_cpsc_frame",
    "generate_fs_channel",
    "initial_fs_estimate",
    "multipath",
    "remove_cyclic_prefix",
    "simulate_block",
    "simulate_pilot_phase",
    "block_levels",
    "block_symbols",
    "equalize_block",
    "data_phase_design",
    "estimate_fs_channel_data_phase",
    "CpscBlockSystem",
    "FreqDomainModel",
    "build_freq_model",
    "to_frequency",
    "equalize_frame",
    "iterate_cpsc_estimation_detection",
]
