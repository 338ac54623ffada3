"""Command-line entry points: generate, analyze, verify, normality, sweep."""

import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional

from .config import config, parse_args
from .core.blocks import decompose_stream
from .core.digits import open_stream
from .core.estimators import EstimatorContext, build_trace
from .core.harness import run_suite
from .core.normality import digit_frequencies, frequency_trend, pattern_frequencies, theorem4_diagnostics
from .core.orbit import Exponent, build_schedule, dual_prefix_sums, log_grid, prefix_sums
from .errors import OrbitError
from .storage.models import (
    AnalysisReport,
    BlockRatios,
    NormalityReport,
    RunConfig,
    RunReport,
    SweepReport,
)
from .storage.reports import (
    analysis_rows,
    digits_text,
    dual_rows,
    render_analysis_json,
    render_csv,
    render_dual_csv,
    write_output,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


def _epsilon_bits(args) -> int:
    return args.epsilon if args.epsilon is not None else config.EPSILON_BITS


def _run_config(args, spec: str, p: str) -> RunConfig:
    return RunConfig(
        spec=spec,
        p=p,
        n_max=args.n_max,
        epsilon_bits=_epsilon_bits(args),
        schedule=args.schedule,
        out=args.out,
        guard=args.guard,
        bit_budget=args.bit_budget,
        include_initial=getattr(args, "include_initial", False),
        theorem3=getattr(args, "theorem3", False),
        theorem5=getattr(args, "theorem5", False),
        bound=getattr(args, "bound", None),
    )


def _exit_code(reports: List[RunReport]) -> int:
    checks = [check for report in reports for check in report.checks]
    if any(check.error is not None for check in checks):
        return EXIT_ERROR
    if any(not check.passed for check in checks):
        return EXIT_VIOLATION
    return EXIT_OK


# -- subcommands ---------------------------------------------------------------
def cmd_generate(args) -> int:
    stream = open_stream(args.spec, guard=args.guard)
    prefix = stream.materialize(args.digits)
    write_output(digits_text(prefix), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    stream = open_stream(args.spec, guard=args.guard)
    p = Exponent.parse(args.p)
    bits = _epsilon_bits(args)
    epsilon = Fraction(1, 2**bits)
    decomp = decompose_stream(stream, args.n_max)
    schedule = build_schedule(args.schedule, args.n_max, decomp)

    if args.dual:
        series = dual_prefix_sums(stream, p, args.n_max, epsilon, schedule, args.bit_budget)
        rows = dual_rows(series)
        text = render_dual_csv(rows) if args.format == "csv" else None
    else:
        series = prefix_sums(stream, p, args.n_max, epsilon, schedule, args.bit_budget)
        context = EstimatorContext(decomp, p, args.bit_budget)
        rows = analysis_rows(series, build_trace(decomp, p, schedule, context))
        text = render_csv(rows) if args.format == "csv" else None

    if text is None:
        report = AnalysisReport(spec=args.spec, p=str(p), n_max=args.n_max, epsilon=f"2^-{bits}",
                                dual=args.dual, rows=rows)
        text = render_analysis_json(report)
    write_output(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(_run_config(args, args.spec, args.p))
    write_output(report.to_json() + "\n", args.out)
    return _exit_code([report])


def cmd_normality(args) -> int:
    stream = open_stream(args.spec, guard=args.guard)
    r = args.pattern_length
    prefix = stream.materialize(args.n_max + r - 1)
    digits = digit_frequencies(prefix, args.n_max)
    patterns = pattern_frequencies(prefix, r, args.n_max)
    trend = frequency_trend(prefix, log_grid(args.n_max))

    decomp = decompose_stream(stream, args.n_max)
    j_max = args.j_max if args.j_max is not None else decomp.closed_blocks
    diagnostics = []
    for j in range(2, j_max + 1):
        ratios = theorem4_diagnostics(decomp, j)
        diagnostics.append(BlockRatios(j=j, ratio_lm=str(ratios.ratio_lm),
                                       ratio_l=str(ratios.ratio_l), ratio_m=str(ratios.ratio_m)))

    report = NormalityReport(
        spec=args.spec,
        n_max=args.n_max,
        digit_frequencies={key: str(value) for key, value in digits.frequencies.items()},
        pattern_length=r,
        pattern_counts=patterns.counts,
        trend=[(n, str(deviation)) for n, deviation in trend.points],
        trend_decreasing=trend.decreasing,
        diagnostics=diagnostics,
    )
    write_output(report.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    p_values = [item.strip() for item in args.p_list.split(",") if item.strip()]
    for p in p_values:
        Exponent.parse(p)
    runs = [_run_config(args, spec, p) for spec in args.spec for p in p_values]
    logger.info(f"Sweeping {len(runs)} runs with {config.MAX_WORKERS} workers")
    if config.MAX_WORKERS <= 1 or len(runs) == 1:
        reports = [run_suite(run) for run in runs]
    else:
        with ProcessPoolExecutor(max_workers=config.MAX_WORKERS) as pool:
            reports = list(pool.map(run_suite, runs))
    sweep = SweepReport(runs=reports, passed=all(report.passed for report in reports))
    write_output(sweep.to_json() + "\n", args.out)
    return _exit_code(reports)


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
    "normality": cmd_normality,
    "sweep": cmd_sweep,
}


def _report_error(args, error: dict):
    if getattr(args, "error_json", False):
        sys.stdout.write(json.dumps(error) + "\n")


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    config.apply_args(args)

    logging.basicConfig(
        level=config.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )

    try:
        return COMMANDS[args.command](args)
    except OrbitError as e:
        logger.error(f"{args.command} failed: {e}")
        _report_error(args, e.to_dict())
        return EXIT_ERROR
    except (ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        _report_error(args, {"error": "InvalidArgument", "message": str(e)})
        return EXIT_ERROR


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
