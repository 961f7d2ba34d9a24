from dataclasses import dataclass, field
from enum import Enum
import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class DetectorKind(str, Enum):
    CONV_MCMC = "conv_mcmc"
    CONV_MCMC_R = "conv_mcmc_r"
    RMCMC = "rmcmc"
    RMCMC_R = "rmcmc_r"
    MMSE = "mmse"
    ML_ORACLE = "ml_oracle"


class DetectorParams(BaseModel):
    """Knobs shared by every MCMC detector.

    ``for_system`` gives the restart-wrapper defaults, ``rmcmc_preset`` the
    standalone 4-QAM setting. ``max_iter`` is a sweep budget; 0 returns the
    initial vector untouched.
    """

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(1.0, gt=0)
    c_min: int = Field(10, ge=1)
    c1: float = Field(20.0, gt=0)
    c2: float = Field(1.0, ge=0)
    max_iter: int = Field(64, ge=0)
    R_max: int = Field(50, ge=1)
    neighbor_restricted_random: bool = False
    randomize_each_coordinate: bool = False
    fixed_restarts: Optional[int] = Field(None, ge=1)
    stop_on_stall: bool = True
    record_trace: bool = False
    refresh_every: int = Field(64, ge=1)

    @classmethod
    def for_system(cls, K: int, M: int, **overrides) -> "DetectorParams":
        bits = math.log2(M)
        values = dict(
            c_min=10,
            c1=10.0 * bits,
            c2=0.5 * bits,
            max_iter=int(8 * K * math.isqrt(M)),
            R_max=50,
            neighbor_restricted_random=(M == 64),
        )
        values.update(overrides)
        return cls(**values)

    @classmethod
    def rmcmc_preset(cls, K: int, **overrides) -> "DetectorParams":
        values = dict(c_min=10, c1=20.0, max_iter=16 * K)
        values.update(overrides)
        return cls(**values)


class OpCounter:
    """Running tally of real additions, multiplications, comparisons and exp calls."""

    def __init__(self, start: int = 0):
        self.total = int(start)

    def add(self, n: int) -> None:
        self.total += int(n)


@dataclass
class DetectorResult:
    x_hat: np.ndarray
    best_cost: float
    sweeps_used: int = 0
    restarts_used: int = 0
    real_ops: int = 0
    trace: Optional[List[float]] = None
    restart_costs: Optional[List[float]] = None
    random_updates: Optional[np.ndarray] = field(default=None, repr=False)
