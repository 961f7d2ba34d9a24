import configparser
from enum import Enum
import logging
import math
import os
from typing import Dict, Iterable, List, Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from detect.oracle import DEFAULT_ORACLE_CAP
from detect.params import DetectorKind, DetectorParams
from errors import ConfigError
from system_model.alphabet import SUPPORTED_ORDERS
from system_model.channel import SnrConvention, UniformDb

load_dotenv()
logger = logging.getLogger(__name__)

WORKERS_ENV = "MIMO_MCMC_WORKERS"
LIST_FIELDS = {"snr_grid_db", "pdp", "imbalance_db"}
DETECTOR_OVERRIDES = (
    "alpha",
    "c_min",
    "c1",
    "c2",
    "max_iter",
    "R_max",
    "neighbor_restricted_random",
    "randomize_each_coordinate",
    "fixed_restarts",
)


def default_workers() -> int:
    raw = os.getenv(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("ignoring %s=%r, expected an integer", WORKERS_ENV, raw)
        return 1


class Scenario(str, Enum):
    FLAT_PERFECT_CSI = "flat_perfect_csi"
    FLAT_ESTIMATED = "flat_estimated"
    CPSC = "cpsc"


class SimConfig(BaseModel):
    """Everything a sweep needs; a run is reproducible from this object alone."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scenario: Scenario = Scenario.FLAT_PERFECT_CSI
    K: int = Field(4, ge=1)
    N: int = Field(4, ge=1)
    M: int = 4
    snr_grid_db: List[float] = Field(default_factory=lambda: [10.0])
    target_bit_errors: int = Field(200, ge=1)
    max_trials: int = Field(10000, ge=0)
    batch_size: int = Field(50, ge=1)

    detector: DetectorKind = DetectorKind.RMCMC_R
    alpha: Optional[float] = Field(None, gt=0)
    c_min: Optional[int] = Field(None, ge=1)
    c1: Optional[float] = Field(None, gt=0)
    c2: Optional[float] = Field(None, ge=0)
    max_iter: Optional[int] = Field(None, ge=0)
    R_max: Optional[int] = Field(None, ge=1)
    neighbor_restricted_random: Optional[bool] = None
    randomize_each_coordinate: Optional[bool] = None
    fixed_restarts: Optional[int] = Field(None, ge=1)

    Q: int = Field(9, ge=0)
    L: int = Field(1, ge=1)
    I: int = Field(1, ge=1)
    pdp: Optional[List[float]] = None
    perfect_csi: bool = False
    est_iters: int = Field(2, ge=0)
    est_max: int = Field(2, ge=0)
    use_augmented_norm: bool = True

    imbalance_db: Optional[Tuple[float, float]] = None
    snr_convention: SnrConvention = SnrConvention.PER_ANTENNA
    master_seed: int = Field(0, ge=0)
    workers: int = Field(default_factory=default_workers, ge=1)
    oracle_cap: int = Field(DEFAULT_ORACLE_CAP, ge=1)
    timing: bool = False

    @model_validator(mode="after")
    def _check_consistency(self):
        if self.M not in SUPPORTED_ORDERS:
            raise ValueError(f"M={self.M} is not one of {SUPPORTED_ORDERS}")
        if self.K > self.N:
            raise ValueError(f"K={self.K} exceeds N={self.N}")
        if self.imbalance_db is not None and self.imbalance_db[0] > self.imbalance_db[1]:
            raise ValueError("imbalance_db must be given as lo,hi with lo <= hi")
        if self.scenario == Scenario.CPSC:
            if self.pdp is not None and len(self.pdp) != self.L:
                raise ValueError(f"pdp has {len(self.pdp)} entries for L={self.L}")
            if self.L > self.I:
                raise ValueError(f"L={self.L} exceeds I={self.I}")
        return self

    @property
    def imbalance(self) -> Optional[UniformDb]:
        return None if self.imbalance_db is None else UniformDb(*self.imbalance_db)

    def detector_params(self) -> DetectorParams:
        overrides = {
            name: getattr(self, name) for name in DETECTOR_OVERRIDES if getattr(self, name) is not None
        }
        K = self.K * self.symbols_per_user_per_detection
        if self.detector == DetectorKind.RMCMC and self.M == 4:
            return DetectorParams.rmcmc_preset(K, **overrides)
        return DetectorParams.for_system(K, self.M, **overrides)

    @property
    def symbols_per_user_per_detection(self) -> int:
        return self.I if self.scenario == Scenario.CPSC else 1

    def oracle_search_size(self) -> int:
        dims = 2 * self.K * self.symbols_per_user_per_detection
        return math.isqrt(self.M) ** dims


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if raw.lower() == "none":
        return None
    if key in LIST_FIELDS:
        # an explicitly empty list stays empty instead of falling back to the default
        return [float(v) for v in raw.split(",") if v.strip()]
    return raw or None


def _flatten(parser: configparser.ConfigParser) -> Dict[str, str]:
    values: Dict[str, str] = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            values[key] = raw
    return values


def _canonical_keys() -> Dict[str, str]:
    # configparser lower-cases keys; map them back onto field names such as K or R_max
    return {name.lower(): name for name in SimConfig.model_fields}


def build_config(values: Dict[str, object]) -> SimConfig:
    """Validate a flat key/value mapping into a SimConfig, raising ConfigError on the first bad field."""
    names = _canonical_keys()
    fields = {}
    for key, value in values.items():
        name = names.get(key.lower())
        if name is None:
            raise ConfigError(key, "unknown configuration key")
        if isinstance(value, str):
            try:
                value = _parse_value(name, value)
            except ValueError:
                raise ConfigError(name, f"cannot parse {value!r} as a list of numbers")
        if value is not None:
            fields[name] = value
    try:
        return SimConfig(**fields)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(part) for part in first.get("loc", ())) or "config"
        raise ConfigError(loc, first.get("msg", "invalid value")) from exc


def parse_overrides(pairs: Iterable[str]) -> Dict[str, str]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(pair, "override must look like key=value")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_config(path: Optional[str] = None, overrides: Iterable[str] = ()) -> SimConfig:
    """Read an INI recipe, apply ``key=value`` overrides on top and validate."""
    values: Dict[str, object] = {}
    if path is not None:
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        try:
            with open(path, "r", encoding="utf-8") as f:
                parser.read_file(f)
        except OSError as exc:
            raise OSError(f"cannot read configuration file {path}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(str(path), f"malformed configuration file: {exc}") from exc
        values.update(_flatten(parser))
    values.update(parse_overrides(overrides))
    return build_config(values)
