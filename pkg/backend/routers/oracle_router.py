import logging
from typing import List

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from detect.params import DetectorKind
from errors import MimoSimError
from harness.oracle_check import OracleReport, oracle_check

logger = logging.getLogger(__name__)

router = APIRouter(
    prefix="/oracle",
    tags=["oracle"]
)


class OracleRequest(BaseModel):
    K: int = Field(4, ge=1)
    N: int = Field(4, ge=1)
    M: int = 4
    snr_db: float = 11.0
    trials: int = Field(100, ge=0)
    seed: int = Field(0, ge=0)
    detectors: List[DetectorKind] = [DetectorKind.RMCMC, DetectorKind.RMCMC_R]


class OracleResponse(BaseModel):
    passed: bool
    report: OracleReport


@router.post("/check", response_model=OracleResponse)
def check(request: OracleRequest):
    try:
        report = oracle_check(request.K, request.M, request.snr_db, request.trials,
                              seed=request.seed, N=request.N, detectors=request.detectors)
    except MimoSimError as exc:
        logger.warning("oracle check rejected: %s", exc)
        raise HTTPException(status_code=422, detail=str(exc))
    return OracleResponse(passed=report.passed, report=report)
