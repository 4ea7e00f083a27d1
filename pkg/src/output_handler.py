"""Rendering of command reports as exact text, decimals, JSON or CSV."""
import csv
import io
import logging
from typing import Iterable, List

from mpmath.ctx_mp import MPContext

from . import config
from .models import CotangentReport, OracleSummary, SecantReport, TableRow, VerifyReport
from .numeric_oracle import SeriesResult
from .quad_field import QuadElem

logger = logging.getLogger(__name__)

CSV_HEADER = ["d", "k", "value_x", "value_y", "D", "decimal", "methods_agree", "residual"]


def _context(digits: int) -> MPContext:
    ctx = MPContext()
    ctx.dps = digits + 10
    return ctx


def quad_decimal(value: QuadElem, digits: int = None, pi_power: int = 0) -> str:
    """value * pi^pi_power to ``digits`` significant digits ("." separator, no locale)."""
    digits = config.DECIMAL_DIGITS if digits is None else digits
    ctx = _context(digits)
    number = value.to_mpf(ctx)
    if pi_power:
        number *= ctx.pi ** pi_power
    return ctx.nstr(number, digits)


def oracle_summary(series: SeriesResult, prec_bits: int) -> OracleSummary:
    return OracleSummary(
        terms=series.terms_used,
        prec_bits=prec_bits,
        series=str(series.value.to_decimal(config.DECIMAL_DIGITS)),
        error_bound=f"{series.error_bound:.3e}",
        oscillation=str(series.oscillation),
        max_term=str(series.max_term_magnitude),
        tail_note=series.tail_note,
    )


def _secant_text(report: SecantReport, decimal_only: bool) -> List[str]:
    lines = [f"alpha = {report.alpha_expr}", f"k = {report.k}"]
    if not decimal_only:
        lines.append(f"psi(alpha, {2 * report.k}) / pi^{2 * report.k} = {report.exact}")
    lines.append(f"decimal: {report.decimal}")
    lines.append(f"psi(alpha, {2 * report.k}) = {report.psi_decimal}")
    methods = ', '.join(m.method for m in report.methods)
    lines.append(f"methods: {methods} ({'agree' if report.methods_agree else 'DISAGREE'})")
    lines.append(f"oracle: {report.oracle.series} ± {report.oracle.error_bound} ({report.oracle.terms} terms, {report.oracle.prec_bits} bits)")
    status = "within" if report.within_tolerance else "OVER"
    lines.append(f"residual: {report.residual} ({status} tolerance {report.tolerance:g})")
    lines.append(f"note: {report.oracle.tail_note}")
    return lines


def _cotangent_text(report: CotangentReport, decimal_only: bool) -> List[str]:
    lines = [f"alpha = {report.alpha_expr}", f"k = {report.k}"]
    if not decimal_only:
        lines.append(f"|xi(alpha, {2 * report.k + 1})| / ((2 pi)^{2 * report.k + 1} sqrt({report.alpha.D})) = {report.magnitude}")
        lines.append(f"sign: {'+' if report.sign > 0 else '-'} ({'adjudicated by the series' if report.adjudicated else 'from the formula'})")
        lines.append(f"value: {report.value}")
    lines.append(f"xi(alpha, {2 * report.k + 1}) = {report.xi_decimal}")
    lines.append(f"oracle: {report.oracle.series} ± {report.oracle.error_bound}")
    if report.residual is not None:
        lines.append(f"residual: {report.residual}")
    lines.append(f"provenance: {report.provenance}")
    return lines


def _verify_text(report: VerifyReport, decimal_only: bool) -> List[str]:
    lines = [f"alpha = {report.alpha_expr}", f"k = {report.k}", f"check: {report.kind}"]
    if report.exact is not None and not decimal_only:
        lines.append(f"value: {report.exact}")
    if report.lerch is not None:
        lines.append(f"residual (+ sign): {report.lerch.plus}")
        lines.append(f"residual (- sign): {report.lerch.minus}")
        lines.append(f"fitting sign: {'+' if report.lerch.fitting_sign > 0 else '-'}")
    if report.oracle is not None:
        lines.append(f"oracle: {report.oracle.series} ± {report.oracle.error_bound} ({report.oracle.terms} terms, {report.oracle.prec_bits} bits)")
    lines.append(f"residual: {report.residual} (tolerance {report.tolerance:g})")
    lines.append(f"result: {'PASS' if report.passed else 'FAIL'}")
    return lines


def render_report(report, fmt: str) -> str:
    if fmt == "json":
        return report.model_dump_json(indent=2)
    decimal_only = fmt == "decimal"
    if isinstance(report, SecantReport):
        lines = _secant_text(report, decimal_only)
    elif isinstance(report, CotangentReport):
        lines = _cotangent_text(report, decimal_only)
    elif isinstance(report, VerifyReport):
        lines = _verify_text(report, decimal_only)
    else:
        raise TypeError(f"cannot render {type(report).__name__}")
    return "\n".join(lines)


def render_table(rows: Iterable[TableRow], fmt: str) -> str:
    rows = list(rows)
    if fmt == "json":
        return "[\n" + ",\n".join(row.model_dump_json() for row in rows) + "\n]"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([
                row.d, row.k, row.value_x, row.value_y, row.D, row.decimal,
                "true" if row.methods_agree else "false", row.residual,
            ])
        return buffer.getvalue().rstrip("\n")
    lines = []
    for row in rows:
        value = str(QuadElem(row.value_x, row.value_y, row.D))
        lines.append(f"d={row.d} k={row.k}: {value} ~ {row.decimal} (agree={row.methods_agree}, residual={row.residual})")
    return "\n".join(lines)
