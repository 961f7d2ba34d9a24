import math
from typing import List

import pandas as pd

from harness.sweep import SweepResult, SweepRow

COLUMNS = list(SweepRow.model_fields)
INT_COLUMNS = {"iteration", "trials", "bits", "bit_errors"}
OPTIONAL_COLUMNS = {"mse", "siso_ber", "wall_time"}


def emit_csv(result: SweepResult, path: str) -> str:
    """One header row plus one row per (SNR, iteration); missing values are written as empty fields."""
    frame = pd.DataFrame([row.model_dump() for row in result.rows], columns=COLUMNS)
    for name in OPTIONAL_COLUMNS:
        frame[name] = frame[name].astype(float)
    try:
        frame.to_csv(path, index=False, na_rep="", lineterminator="\n")
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc
    return path


def _cell(name: str, value):
    if name in OPTIONAL_COLUMNS:
        return None if value is None or (isinstance(value, float) and math.isnan(value)) else float(value)
    if name in INT_COLUMNS:
        return int(value)
    return float(value)


def parse_csv(path: str) -> SweepResult:
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except OSError as exc:
        raise OSError(f"cannot read sweep CSV from {path}: {exc}") from exc
    rows: List[SweepRow] = []
    for record in frame.to_dict(orient="records"):
        rows.append(SweepRow(**{name: _cell(name, record.get(name)) for name in COLUMNS}))
    return SweepResult(rows=rows)


def write_table_csv(frame: pd.DataFrame, path: str) -> str:
    try:
        frame.to_csv(path, index=False, lineterminator="\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path
