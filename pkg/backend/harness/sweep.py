from concurrent.futures import ProcessPoolExecutor
import logging
import time
from typing import List, Optional, Tuple

from pydantic import BaseModel
from tqdm import tqdm

from detect.params import DetectorKind
from errors import OracleCapExceededError
from harness.config import SimConfig
from harness.trials import BatchTally, run_batch
from system_model.reference import siso_awgn_ber

logger = logging.getLogger(__name__)


class SweepRow(BaseModel):
    snr_db: float
    iteration: int = 0
    trials: int
    bits: int
    bit_errors: int
    ber: float
    avg_real_ops_per_bit: float
    avg_sweeps: float
    avg_restarts: float
    mse: Optional[float] = None
    siso_ber: Optional[float] = None
    wall_time: Optional[float] = None


class SweepResult(BaseModel):
    rows: List[SweepRow] = []
    config: Optional[SimConfig] = None

    def iterations(self) -> List[int]:
        return sorted({row.iteration for row in self.rows})

    def curve(self, iteration: Optional[int] = None) -> List[SweepRow]:
        """Rows of one iteration (the last one by default), in grid order."""
        if not self.rows:
            return []
        if iteration is None:
            iteration = max(self.iterations())
        return [row for row in self.rows if row.iteration == iteration]


def _rows_for_point(snr_db: float, tally: BatchTally, trials: int, wall_time: Optional[float],
                    siso_ber: Optional[float] = None) -> List[SweepRow]:
    if not tally.by_iteration:
        return [SweepRow(snr_db=snr_db, trials=0, bits=0, bit_errors=0, ber=0.0,
                         avg_real_ops_per_bit=0.0, avg_sweeps=0.0, avg_restarts=0.0, siso_ber=siso_ber,
                         wall_time=wall_time)]
    rows = []
    for iteration in sorted(tally.by_iteration):
        acc = tally.by_iteration[iteration]
        rows.append(SweepRow(
            snr_db=snr_db,
            iteration=iteration,
            trials=trials,
            bits=acc.bits,
            bit_errors=acc.bit_errors,
            ber=acc.bit_errors / acc.bits if acc.bits else 0.0,
            avg_real_ops_per_bit=acc.real_ops / acc.bits if acc.bits else 0.0,
            avg_sweeps=acc.sweeps / acc.detections if acc.detections else 0.0,
            avg_restarts=acc.restarts / acc.detections if acc.detections else 0.0,
            mse=acc.mse_sum / acc.mse_count if acc.mse_count else None,
            siso_ber=siso_ber,
            wall_time=wall_time,
        ))
    return rows


def _batches(config: SimConfig):
    start = 0
    while start < config.max_trials:
        count = min(config.batch_size, config.max_trials - start)
        yield start, count
        start += count


def _done(tally: BatchTally, trials: int, config: SimConfig) -> bool:
    final = tally.by_iteration.get(tally.final_iteration)
    errors = final.bit_errors if final is not None else 0
    return errors >= config.target_bit_errors or trials >= config.max_trials


def _run_point(config: SimConfig, snr_index: int, pool: Optional[ProcessPoolExecutor], bar) -> Tuple[BatchTally, int]:
    """Accumulate fixed-size batches in order until the error target or trial cap is met.

    Batches are identical whichever process runs them, and results are folded
    in batch order, so the outcome does not depend on the worker count.
    """
    tally = BatchTally()
    trials = 0
    pending = list(_batches(config))
    wave = config.workers if pool is not None else 1
    while pending:
        current, pending = pending[:wave], pending[wave:]
        if pool is None:
            results = [run_batch(config, snr_index, start, count) for start, count in current]
        else:
            futures = [pool.submit(run_batch, config, snr_index, start, count) for start, count in current]
            results = [future.result() for future in futures]
        for (start, count), batch in zip(current, results):
            tally.merge(batch)
            trials += count
            bar.update(count)
            if _done(tally, trials, config):
                return tally, trials
    return tally, trials


def check_oracle_cap(config: SimConfig) -> None:
    if config.detector == DetectorKind.ML_ORACLE and config.oracle_search_size() > config.oracle_cap:
        raise OracleCapExceededError(
            f"ML oracle would search {config.oracle_search_size()} vectors, above the cap {config.oracle_cap}"
        )


def run_sweep(config: SimConfig, progress: bool = False) -> SweepResult:
    """BER/MSE/complexity sweep over ``config.snr_grid_db``."""
    check_oracle_cap(config)
    rows: List[SweepRow] = []
    pool = ProcessPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    try:
        for snr_index, snr_db in enumerate(config.snr_grid_db):
            started = time.perf_counter()
            with tqdm(total=config.max_trials, desc=f"SNR {snr_db:g} dB", disable=not progress,
                      leave=False) as bar:
                tally, trials = _run_point(config, snr_index, pool, bar)
            elapsed = time.perf_counter() - started
            point_rows = _rows_for_point(snr_db, tally, trials, elapsed if config.timing else None,
                                         siso_awgn_ber(config.M, snr_db))
            last = point_rows[-1]
            logger.info("SNR %.2f dB: %d trials, %d/%d bit errors, BER %.3e (%.1fs)",
                        snr_db, trials, last.bit_errors, last.bits, last.ber, elapsed)
            rows.extend(point_rows)
    finally:
        if pool is not None:
            pool.shutdown()
    logger.info("sweep finished: %d SNR points, detector %s", len(config.snr_grid_db), config.detector.value)
    return SweepResult(rows=rows, config=config)
