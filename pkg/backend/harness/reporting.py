import logging
from typing import Optional

from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from errors import NotBracketedError
from harness.analysis import interpolate_snr_at_ber, siso_snr_at_ber
from harness.sweep import SweepResult

logger = logging.getLogger(__name__)

REPORT_TARGETS = (1e-2, 1e-3)


def _fmt(value, spec: str = ".3e") -> str:
    return "-" if value is None else format(value, spec)


def export_pdf_report(result: SweepResult, output_path: Optional[str] = None,
                      title: str = "MCMC receiver sweep") -> str:
    """Render a sweep as a PDF: configuration summary, per-point table and interpolated operating points."""
    if output_path is None:
        output_path = "./sweep_report.pdf"

    doc = SimpleDocTemplate(output_path, pagesize=A4)
    styles = getSampleStyleSheet()
    story = []

    title_style = ParagraphStyle(
        "Title",
        parent=styles["Heading1"],
        alignment=1,
        fontSize=18,
        spaceAfter=12,
        textColor=colors.HexColor("#2E4053"),
    )
    section_style = ParagraphStyle(
        "Section",
        parent=styles["Heading2"],
        textColor=colors.HexColor("#154360"),
        spaceAfter=8,
    )
    body_style = ParagraphStyle("Body", parent=styles["BodyText"], fontSize=10, leading=14)

    story.append(Paragraph(title, title_style))
    story.append(Spacer(1, 12))

    if result.config is not None:
        cfg = result.config
        summary = [
            ["Scenario", cfg.scenario.value],
            ["Users / antennas", f"{cfg.K} / {cfg.N}"],
            ["Modulation", f"{cfg.M}-QAM"],
            ["Detector", cfg.detector.value],
            ["Error target / max trials", f"{cfg.target_bit_errors} / {cfg.max_trials}"],
            ["Master seed", str(cfg.master_seed)],
        ]
        table = Table(summary, colWidths=[170, 300])
        table.setStyle(TableStyle([
            ("GRID", (0, 0), (-1, -1), 0.5, colors.grey),
            ("BACKGROUND", (0, 0), (0, -1), colors.HexColor("#D6EAF8")),
            ("FONTSIZE", (0, 0), (-1, -1), 9),
        ]))
        story.append(Paragraph("Configuration", section_style))
        story.append(table)
        story.append(Spacer(1, 12))

    header = ["SNR (dB)", "Iter", "Trials", "Bit errors", "BER", "Ops/bit", "Sweeps", "Restarts", "MSE", "SISO BER"]
    rows = [header]
    for row in result.rows:
        rows.append([
            f"{row.snr_db:g}", str(row.iteration), str(row.trials), str(row.bit_errors), _fmt(row.ber),
            _fmt(row.avg_real_ops_per_bit, ".4g"), _fmt(row.avg_sweeps, ".1f"), _fmt(row.avg_restarts, ".2f"),
            _fmt(row.mse), _fmt(row.siso_ber),
        ])
    table = Table(rows, repeatRows=1)
    table.setStyle(TableStyle([
        ("GRID", (0, 0), (-1, -1), 0.5, colors.grey),
        ("BACKGROUND", (0, 0), (-1, 0), colors.HexColor("#154360")),
        ("TEXTCOLOR", (0, 0), (-1, 0), colors.white),
        ("FONTSIZE", (0, 0), (-1, -1), 8),
    ]))
    story.append(Paragraph("Results", section_style))
    story.append(table)
    story.append(Spacer(1, 12))

    story.append(Paragraph("Operating points", section_style))
    for target in REPORT_TARGETS:
        try:
            snr = interpolate_snr_at_ber(result, target)
            text = f"BER {target:g} reached at {snr:.2f} dB"
            if result.config is not None:
                gap = snr - siso_snr_at_ber(result.config.M, target)
                text += f" ({gap:.2f} dB from the SISO AWGN reference)"
        except NotBracketedError:
            text = f"BER {target:g} not bracketed by the simulated grid"
        story.append(Paragraph(text, body_style))

    try:
        doc.build(story)
    except OSError as exc:
        raise OSError(f"cannot write report to {output_path}: {exc}") from exc
    logger.info("report written to %s", output_path)
    return output_path
