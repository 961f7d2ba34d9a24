"""Command-line entry point.

    simulate --config recipes/ber_k16_qam4.ini --set snr_grid_db=8,10 --out ber.csv
    oracle-check --k 4 --mod 4 --snr 11 --trials 100000
    report --csv ber.csv --out ber.pdf
    trace / phi-histogram / interpolate
"""

import argparse
import logging
import sys
from typing import List, Optional

from detect.params import DetectorKind
from errors import MimoSimError
from harness.analysis import interpolate_snr_at_ber, siso_snr_at_ber
from harness.config import load_config
from harness.csv_io import emit_csv, parse_csv, write_table_csv
from harness.diagnostics import run_phi_histogram, run_trace
from harness.logging_setup import setup_logging
from harness.oracle_check import oracle_check
from harness.reporting import export_pdf_report
from harness.sweep import run_sweep

logger = logging.getLogger("mimo_mcmc.cli")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_REJECTED = 2


def _simulate(args) -> int:
    overrides = list(args.set or [])
    if args.workers is not None:
        overrides.append(f"workers={args.workers}")
    if args.timing:
        overrides.append("timing=true")
    config = load_config(args.config, overrides)
    result = run_sweep(config, progress=args.progress)
    emit_csv(result, args.out)
    logger.info("wrote %d rows to %s", len(result.rows), args.out)
    if args.report:
        export_pdf_report(result, args.report)
    return EXIT_OK


def _oracle_check(args) -> int:
    detectors = [DetectorKind(d) for d in args.detectors.split(",")]
    report = oracle_check(args.k, args.mod, args.snr, args.trials, seed=args.seed, N=args.n,
                          detectors=detectors, progress=args.progress)
    print(f"ML BER {report.ml_ber:.4e} ({report.ml_bit_errors}/{report.bits})")
    for entry in report.entries:
        status = "ok" if entry.within_tolerance and entry.cost_violations == 0 else "MISMATCH"
        print(f"{entry.detector.value:12s} BER {entry.ber:.4e} +/- {entry.tolerance:.1e} "
              f"equal-cost {entry.equal_cost_rate:.4f} violations {entry.cost_violations} {status}")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _report(args) -> int:
    result = parse_csv(args.csv)
    export_pdf_report(result, args.out, title=args.title)
    return EXIT_OK


def _trace(args) -> int:
    frame = run_trace(args.k, args.n or args.k, args.mod, args.snr, n_inits=args.inits,
                      sweeps=args.sweeps, seed=args.seed)
    write_table_csv(frame, args.out)
    return EXIT_OK


def _histogram(args) -> int:
    frame = run_phi_histogram(args.k, args.n or args.k, args.mod, args.snr, args.trials,
                              seed=args.seed, bins=args.bins)
    write_table_csv(frame, args.out)
    return EXIT_OK


def _interpolate(args) -> int:
    snr = interpolate_snr_at_ber(parse_csv(args.csv), args.ber, args.iteration)
    print(f"{snr:.3f}")
    if args.siso_mod is not None:
        reference = siso_snr_at_ber(args.siso_mod, args.ber)
        print(f"siso {reference:.3f} gap {snr - reference:.3f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mimo-mcmc", description="MCMC receiver link-level simulator")
    parser.add_argument("--log-level", default="INFO")
    parser.add_argument("--log-file", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a BER/MSE sweep from a recipe")
    p.add_argument("--config", default=None, help="INI recipe")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a recipe key")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="record wall time per SNR point")
    p.add_argument("--progress", action="store_true")
    p.add_argument("--report", default=None, help="also write a PDF report here")
    p.set_defaults(handler=_simulate)

    p = sub.add_parser("oracle-check", help="compare MCMC detectors against exhaustive ML")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--mod", type=int, default=4)
    p.add_argument("--snr", type=float, default=11.0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--detectors", default="rmcmc,rmcmc_r")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(handler=_oracle_check)

    p = sub.add_parser("report", help="render a sweep CSV as PDF")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="MCMC receiver sweep")
    p.set_defaults(handler=_report)

    p = sub.add_parser("trace", help="least-cost traces of randomized vs plain Gibbs")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--mod", type=int, default=4)
    p.add_argument("--snr", type=float, default=11.0)
    p.add_argument("--inits", type=int, default=3)
    p.add_argument("--sweeps", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_trace)

    p = sub.add_parser("phi-histogram", help="standardized-cost histograms of correct and wrong outputs")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--mod", type=int, default=4)
    p.add_argument("--snr", type=float, default=11.0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_histogram)

    p = sub.add_parser("interpolate", help="SNR at a target BER from a sweep CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--ber", type=float, required=True)
    p.add_argument("--iteration", type=int, default=None)
    p.add_argument("--siso-mod", type=int, default=None,
                   help="also print the SISO AWGN reference SNR for this QAM order")
    p.set_defaults(handler=_interpolate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_file)
    try:
        return args.handler(args)
    except MimoSimError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except OSError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
