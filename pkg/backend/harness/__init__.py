from harness.analysis import interpolate_snr_at_ber
from harness.config import Scenario, SimConfig, build_config, load_config
from harness.csv_io import emit_csv, parse_csv, write_table_csv
from harness.diagnostics import run_phi_histogram, run_trace
from harness.logging_setup import setup_logging
from harness.oracle_check import OracleReport, oracle_check
from harness.replay import load_frame, save_frame
from harness.reporting import export_pdf_report
from harness.sweep import SweepResult, SweepRow, run_sweep

__all__ = [
    "interpolate_snr_at_ber",
    "Scenario",
    "SimConfig",
    "build_config",
    "load_config",
    "emit_csv",
    "parse_csv",
    "write_table_csv",
    "run_phi_histogram",
    "run_trace",
    "setup_logging",
    "OracleReport",
    "oracle_check",
    "load_frame",
    "save_frame",
    "export_pdf_report",
    "SweepResult",
    "SweepRow",
    "run_sweep",
]
