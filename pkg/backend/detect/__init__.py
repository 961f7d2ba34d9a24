from detect.conventional import conventional_mcmc, gibbs_sweeps
from detect.dispatch import run_detector
from detect.gibbs import GibbsChain, column_norms, gibbs_conditional_pmf, residual_of
from detect.oracle import DEFAULT_ORACLE_CAP, ml_bruteforce
from detect.params import DetectorKind, DetectorParams, DetectorResult, OpCounter
from detect.restarts import required_repetitions, rmcmc_with_restarts
from detect.rmcmc import rmcmc, stalling_limit

__all__ = [
    "conventional_mcmc",
    "gibbs_sweeps",
    "run_detector",
    "GibbsChain",
    "column_norms",
    "gibbs_conditional_pmf",
    "residual_of",
    "DEFAULT_ORACLE_CAP",
    "ml_bruteforce",
    "DetectorKind",
    "DetectorParams",
    "DetectorResult",
    "OpCounter",
    "required_repetitions",
    "rmcmc_with_restarts",
    "rmcmc",
    "stalling_limit",
]
