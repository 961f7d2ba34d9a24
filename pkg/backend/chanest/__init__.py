from chanest.crlb import CrlbMode, crlb_mse
from chanest.frame import FlatFrame, FrameConfig, assemble_flat_frame, generate_flat_frame, initial_estimate
from chanest.gibbs_estimator import (
    GibbsEstimatorState,
    gibbs_channel_estimate,
    gibbs_conditional_params,
    gibbs_estimator_run,
)
from chanest.iterative import (
    DetectionTally,
    EstimationOutcome,
    IterationRecord,
    channel_mse,
    detect_columns,
    iterate_estimation_detection,
)
from chanest.vectorized import DenseLinearModel, VectorizedModel, channel_to_g, g_to_channel, vectorize_frame

__all__ = [
    "CrlbMode",
    "crlb_mse",
    "FlatFrame",
    "FrameConfig",
    "assemble_flat_frame",
    "generate_flat_frame",
    "initial_estimate",
    "GibbsEstimatorState",
    "gibbs_channel_estimate",
    "gibbs_conditional_params",
    "gibbs_estimator_run",
    "DetectionTally",
    "EstimationOutcome",
    "IterationRecord",
    "channel_mse",
    "detect_columns",
    "iterate_estimation_detection",
    "DenseLinearModel",
    "VectorizedModel",
    "channel_to_g",
    "g_to_channel",
    "vectorize_frame",
]
