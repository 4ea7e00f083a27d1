import argparse
import functools
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from . import config
from .errors import (
    DomainError,
    MethodDisagreementError,
    ParseError,
    ResonanceError,
    ResourceCapError,
)
from .functional_equations import cotangent_unit_value
from .methods import get_methods
from .models import (
    CotangentReport,
    ExactValue,
    JobConfig,
    LerchSummary,
    MethodResult,
    SecantReport,
    TableRow,
    VerifyReport,
)
from .numeric_oracle import (
    exact_residual,
    lerch_fe_residual,
    psi_series,
    retry_with_precision,
    xi_series,
)
from .output_handler import oracle_summary, quad_decimal, render_report, render_table
from .quad_field import QuadElem, parse_irrational, parse_quad

logger = logging.getLogger(__name__)

robust_psi_series = retry_with_precision()(psi_series)
robust_xi_series = retry_with_precision()(xi_series)

_COMMANDS: Dict[str, Tuple[Callable, str]] = {}


def command(name: str, description: str):
    """Register a subcommand handler taking parsed argparse arguments"""
    def decorator(func: Callable) -> Callable:
        _COMMANDS[name] = (func, description)
        return func
    return decorator


def argument(*flags, **kwargs):
    """Attach an argparse argument to a registered command"""
    def decorator(func: Callable) -> Callable:
        func.__dict__.setdefault('cli_arguments', []).insert(0, (flags, kwargs))
        return func
    return decorator


def handle_command_errors(func: Callable) -> Callable:
    """Decorator mapping library errors to process exit codes"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except (ParseError, DomainError, ValidationError) as e:
            logger.error(f"Invalid input: {e}")
            print(f"error: {e}", file=sys.stderr)
            return 2
        except MethodDisagreementError as e:
            logger.error(f"Methods disagree: {e}")
            print(f"error: {e}", file=sys.stderr)
            return 3
        except ResourceCapError as e:
            logger.warning(f"Resource cap reached: {e}")
            print(f"error: {e}", file=sys.stderr)
            return 4
        except ResonanceError as e:
            logger.error(f"Resonance failure: {e}")
            print(f"error: {e}", file=sys.stderr)
            return 5
        except Exception as e:
            logger.error(f"Command failed: {e}", exc_info=True)
            raise
    return wrapper


def tolerance_for(k: int) -> float:
    return config.TOLERANCE_CONDITIONAL if k == 1 else config.TOLERANCE_ABSOLUTE


def parse_range(text: str) -> Tuple[int, int]:
    """"2..10" -> (2, 10); "3" -> (3, 3)."""
    parts = text.split('..')
    try:
        if len(parts) == 1:
            value = int(parts[0])
            return value, value
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise ParseError(f"expected an integer or a range lo..hi, got {text!r}")


def _exact_values(alpha: QuadElem, k: int, cfg: JobConfig, workers: Optional[int] = None):
    methods = get_methods(cfg.method, c_cap=cfg.c_cap, workers=cfg.workers if workers is None else workers)
    results = [method.secant_value(alpha, k) for method in methods]
    agree = all(r.value == results[0].value for r in results)
    return results, agree


def run_secant(cfg: JobConfig) -> SecantReport:
    alpha = parse_irrational(cfg.alpha_expr)
    results, agree = _exact_values(alpha, cfg.k, cfg)
    if not agree:
        listing = ', '.join(f"{r.method.value}={r.value}" for r in results)
        raise MethodDisagreementError(f"secant value at alpha={alpha}, k={cfg.k}: {listing}")
    value = results[0].value

    series = robust_psi_series(alpha, cfg.k, N=cfg.terms, prec_bits=cfg.prec_bits, workers=cfg.workers)
    residual = exact_residual(value, cfg.k, series)
    tolerance = tolerance_for(cfg.k)
    within_tolerance = residual <= Decimal(str(tolerance))
    if not within_tolerance:
        logger.warning(f"oracle residual {residual} exceeds {tolerance} at alpha={alpha}, k={cfg.k}")

    return SecantReport(
        alpha_expr=cfg.alpha_expr,
        alpha=ExactValue.from_quad(alpha),
        k=cfg.k,
        value=ExactValue.from_quad(value),
        exact=str(value),
        decimal=quad_decimal(value),
        psi_decimal=quad_decimal(value, pi_power=2 * cfg.k),
        methods=[MethodResult(method=r.method.value, value=ExactValue.from_quad(r.value)) for r in results],
        methods_agree=agree,
        residual=str(residual),
        tolerance=tolerance,
        within_tolerance=within_tolerance,
        oracle=oracle_summary(series, cfg.prec_bits),
    )


def run_cotangent(cfg: JobConfig) -> CotangentReport:
    alpha = parse_irrational(cfg.alpha_expr)
    observed = {}

    def oracle(a: QuadElem, k: int):
        observed['series'] = robust_xi_series(a, k, N=cfg.terms, prec_bits=cfg.prec_bits, workers=cfg.workers)
        return observed['series']

    result = cotangent_unit_value(alpha, cfg.k, oracle=oracle)
    series = observed['series']
    s = 2 * cfg.k + 1
    xi_value = QuadElem(0, result.value, alpha.D)
    provenance = (
        f"magnitude from the rationality formula at the unit {alpha} (norm {alpha.norm()}); "
        + (f"sign read off xi({s}) summed to {cfg.terms} terms at {cfg.prec_bits} bits"
           if result.sign_adjudicated else "the series did not separate from zero, sign taken from the formula")
    )
    return CotangentReport(
        alpha_expr=cfg.alpha_expr,
        alpha=ExactValue.from_quad(alpha),
        k=cfg.k,
        magnitude=str(result.magnitude),
        formula_value=str(result.formula_value),
        sign=result.oracle_sign,
        value=str(result.value),
        adjudicated=result.sign_adjudicated,
        xi_decimal=quad_decimal(xi_value * 2 ** s, pi_power=s),
        residual=None if result.oracle_residual is None else f"{result.oracle_residual:.3e}",
        provenance=provenance,
        oracle=oracle_summary(series, cfg.prec_bits),
    )


def run_verify(cfg: JobConfig) -> VerifyReport:
    alpha = parse_irrational(cfg.alpha_expr)
    tolerance = tolerance_for(cfg.k)

    if cfg.kind == 'lerch':
        residuals = lerch_fe_residual(alpha, cfg.k, N=cfg.terms, prec_bits=cfg.prec_bits, workers=cfg.workers)
        fitting = min(residuals.plus, residuals.minus)
        return VerifyReport(
            alpha_expr=cfg.alpha_expr,
            alpha=ExactValue.from_quad(alpha),
            k=cfg.k,
            kind=cfg.kind,
            residual=str(fitting),
            tolerance=tolerance,
            passed=fitting <= Decimal(str(tolerance)),
            lerch=LerchSummary(plus=str(residuals.plus), minus=str(residuals.minus),
                               fitting_sign=residuals.fitting_sign),
        )

    if cfg.kind == 'cotangent':
        report = run_cotangent(cfg.model_copy(update={'command': 'cotangent'}))
        residual = Decimal(report.residual) if report.residual is not None else Decimal(0)
        return VerifyReport(
            alpha_expr=cfg.alpha_expr,
            alpha=report.alpha,
            k=cfg.k,
            kind=cfg.kind,
            exact=report.value,
            residual=str(residual),
            tolerance=tolerance,
            passed=residual <= Decimal(str(tolerance)),
            oracle=report.oracle,
        )

    if cfg.value_expr:
        value = parse_quad(cfg.value_expr)
    else:
        results, agree = _exact_values(alpha, cfg.k, cfg)
        if not agree:
            raise MethodDisagreementError(f"methods disagree at alpha={alpha}, k={cfg.k}")
        value = results[0].value
    series = robust_psi_series(alpha, cfg.k, N=cfg.terms, prec_bits=cfg.prec_bits, workers=cfg.workers)
    residual = exact_residual(value, cfg.k, series)
    return VerifyReport(
        alpha_expr=cfg.alpha_expr,
        alpha=ExactValue.from_quad(alpha),
        k=cfg.k,
        kind=cfg.kind,
        value=ExactValue.from_quad(value),
        exact=str(value),
        residual=str(residual),
        tolerance=tolerance,
        passed=residual <= Decimal(str(tolerance)),
        oracle=oracle_summary(series, cfg.prec_bits),
    )


def _table_cell(args) -> TableRow:
    d, k, cfg = args
    alpha = QuadElem.sqrt(d)
    results, agree = _exact_values(alpha, k, cfg, workers=1)
    value = results[0].value
    series = robust_psi_series(alpha, k, N=cfg.terms, prec_bits=cfg.prec_bits, workers=1)
    residual = exact_residual(value, k, series)
    logger.info(f"table cell d={d}, k={k}: {value}")
    return TableRow(
        d=d,
        k=k,
        value_x=str(value.x),
        value_y=str(value.y),
        D=value.D,
        decimal=quad_decimal(value),
        methods_agree=agree,
        residual=str(residual),
    )


def run_table(cfg: JobConfig) -> List[TableRow]:
    d_lo, d_hi = cfg.d_range
    k_lo, k_hi = cfg.k_range
    cells = [
        (d, k, cfg)
        for d in range(d_lo, d_hi + 1)
        if QuadElem.sqrt(d).y
        for k in range(k_lo, k_hi + 1)
    ]
    logger.info(f"table: {len(cells)} cells over d={d_lo}..{d_hi}, k={k_lo}..{k_hi}")
    if cfg.workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_table_cell, cells))
    else:
        rows = [_table_cell(cell) for cell in cells]
    return sorted(rows, key=lambda row: (row.d, row.k))


def _job(args: argparse.Namespace, command_name: str) -> JobConfig:
    fields = {'command': command_name}
    for name in ('alpha_expr', 'k', 'method', 'terms', 'prec_bits', 'format', 'c_cap', 'workers', 'value_expr', 'kind'):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    if command_name == 'table':
        fields['d_range'] = parse_range(args.d)
        fields['k_range'] = parse_range(args.k_range)
    return JobConfig(**fields)


alpha_option = argument('--alpha', dest='alpha_expr', required=True,
                        help='quadratic irrationality, e.g. "(1+sqrt(5))/2"')
k_option = argument('--k', type=int, required=True, help='positive integer; s = 2k (secant) or 2k+1 (cotangent)')
terms_option = argument('--terms', '-N', type=int, help='number of series terms for the oracle')
prec_option = argument('--prec', dest='prec_bits', type=int, help='oracle precision in bits')
method_option = argument('--method', choices=['arakawa', 'lrr', 'both'], help='exact method (default both)')
c_cap_option = argument('--c-cap', dest='c_cap', type=int,
                        help='largest transfer-matrix c the arakawa method accepts')
workers_option = argument('--workers', type=int, help='worker processes')
report_format_option = argument('--format', choices=['exact', 'decimal', 'json'], default='exact')


@command('secant', 'Exact psi(alpha, 2k) / pi^{2k} by both methods, checked against the series')
@alpha_option
@k_option
@method_option
@terms_option
@prec_option
@c_cap_option
@workers_option
@report_format_option
@handle_command_errors
def secant_command(args: argparse.Namespace) -> int:
    cfg = _job(args, 'secant')
    report = run_secant(cfg)
    print(render_report(report, cfg.format))
    if not report.within_tolerance:
        raise MethodDisagreementError(f"exact value and series differ by {report.residual} > {report.tolerance:g}")
    return 0


@command('cotangent', 'Rational cotangent value at a quadratic unit, sign adjudicated by the series')
@alpha_option
@k_option
@terms_option
@prec_option
@workers_option
@report_format_option
@handle_command_errors
def cotangent_command(args: argparse.Namespace) -> int:
    cfg = _job(args, 'cotangent')
    print(render_report(run_cotangent(cfg), cfg.format))
    return 0


@command('verify', 'Re-check an exact value (or the cotangent reciprocity) against the series')
@alpha_option
@k_option
@argument('--value', dest='value_expr', help='exact value of psi(alpha, 2k) / pi^{2k} to check instead of recomputing')
@argument('--kind', choices=['secant', 'cotangent', 'lerch'], help='what to verify (default secant)')
@method_option
@terms_option
@prec_option
@c_cap_option
@workers_option
@report_format_option
@handle_command_errors
def verify_command(args: argparse.Namespace) -> int:
    cfg = _job(args, 'verify')
    report = run_verify(cfg)
    print(render_report(report, cfg.format))
    if not report.passed:
        raise MethodDisagreementError(f"residual {report.residual} exceeds tolerance {report.tolerance:g}")
    return 0


@command('table', 'Secant values at alpha = sqrt(d) over a grid of d and k')
@argument('--d', required=True, help='range of d, e.g. 2..10 (perfect squares are skipped)')
@argument('--k', dest='k_range', required=True, help='range of k, e.g. 1..2')
@method_option
@terms_option
@prec_option
@c_cap_option
@workers_option
@argument('--format', choices=['csv', 'exact', 'json'], default='csv')
@handle_command_errors
def table_command(args: argparse.Namespace) -> int:
    cfg = _job(args, 'table')
    rows = run_table(cfg)
    print(render_table(rows, cfg.format))
    if not all(row.methods_agree for row in rows):
        raise MethodDisagreementError("methods disagree on at least one table cell")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='quadzeta',
        description='Exact secant and cotangent zeta values at real quadratic irrationalities',
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, (func, description) in _COMMANDS.items():
        sub = subparsers.add_parser(name, help=description, description=description)
        for flags, kwargs in getattr(func, 'cli_arguments', []):
            sub.add_argument(*flags, **kwargs)
        sub.set_defaults(handler=func)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage and 0 on --help
        return e.code if isinstance(e.code, int) else 2
    return args.handler(args)
