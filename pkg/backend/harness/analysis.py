import math
from typing import Optional

from scipy.optimize import brentq

from errors import NotBracketedError
from harness.sweep import SweepResult
from system_model.reference import siso_awgn_ber


def interpolate_snr_at_ber(result: SweepResult, target_ber: float, iteration: Optional[int] = None) -> float:
    """SNR where the BER curve crosses ``target_ber``, linear in dB against log10 BER.

    Uses the rows of ``iteration`` (the last iteration by default) in grid
    order and the first bracketing pair of neighbouring points.
    """
    if not 0.0 < target_ber < 1.0:
        raise NotBracketedError(f"target BER {target_ber} must lie strictly between 0 and 1")
    points = sorted((row.snr_db, row.ber) for row in result.curve(iteration) if row.bits > 0)
    for snr, ber in points:
        if ber == target_ber:
            return snr
    for (snr_a, ber_a), (snr_b, ber_b) in zip(points, points[1:]):
        lo, hi = min(ber_a, ber_b), max(ber_a, ber_b)
        if not lo < target_ber < hi or lo <= 0.0:
            continue
        la, lb, lt = math.log10(ber_a), math.log10(ber_b), math.log10(target_ber)
        return snr_a + (lt - la) * (snr_b - snr_a) / (lb - la)
    raise NotBracketedError(f"target BER {target_ber:g} is not bracketed by the simulated grid")


def siso_snr_at_ber(M: int, target_ber: float, lo_db: float = -20.0, hi_db: float = 80.0) -> float:
    """SNR where the single-antenna AWGN reference reaches ``target_ber``."""
    if not 0.0 < target_ber < 0.5:
        raise NotBracketedError(f"target BER {target_ber} must lie strictly between 0 and 0.5")

    def gap(snr_db: float) -> float:
        return math.log10(max(siso_awgn_ber(M, snr_db), 1e-300)) - math.log10(target_ber)

    if gap(lo_db) < 0.0 or gap(hi_db) > 0.0:
        raise NotBracketedError(f"target BER {target_ber:g} is outside the reference range")
    return float(brentq(gap, lo_db, hi_db, xtol=1e-9))
