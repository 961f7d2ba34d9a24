import logging
from typing import Optional

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel

from errors import MimoSimError
from harness.analysis import interpolate_snr_at_ber
from harness.config import SimConfig
from harness.sweep import SweepResult, run_sweep

logger = logging.getLogger(__name__)

router = APIRouter(
    prefix="/sweep",
    tags=["sweep"]
)


class InterpolateRequest(BaseModel):
    result: SweepResult
    target_ber: float
    iteration: Optional[int] = None


class InterpolateResponse(BaseModel):
    snr_db: float


@router.post("/run", response_model=SweepResult)
def run(config: SimConfig):
    try:
        return run_sweep(config)
    except MimoSimError as exc:
        logger.warning("sweep rejected: %s", exc)
        raise HTTPException(status_code=422, detail=str(exc))


@router.post("/interpolate", response_model=InterpolateResponse)
def interpolate(request: InterpolateRequest):
    try:
        snr = interpolate_snr_at_ber(request.result, request.target_ber, request.iteration)
    except MimoSimError as exc:
        logger.warning("interpolation rejected: %s", exc)
        raise HTTPException(status_code=422, detail=str(exc))
    return InterpolateResponse(snr_db=snr)
