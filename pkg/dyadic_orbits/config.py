"""Configuration management for the orbit engine."""

import argparse
import os
from fractions import Fraction
from pathlib import Path
from typing import List, Optional


class Config:
    """Application configuration."""

    # Logging
    LOG_LEVEL = os.getenv("DYADIC_ORBITS_LOG_LEVEL", "INFO")

    # Digit streams
    DEFAULT_GUARD = int(os.getenv("DYADIC_ORBITS_GUARD", "64"))
    RANDOM_LMAX = 16
    FAMILY_VALIDATION_DEPTH = 64  # j = 1..depth checked by validate_spec

    # Interval engine
    EPSILON_BITS = int(os.getenv("DYADIC_ORBITS_EPSILON_BITS", "40"))
    MIN_WORKING_PRECISION = 64
    PRECISION_MARGIN = 16
    BIT_BUDGET = int(os.getenv("DYADIC_ORBITS_BIT_BUDGET", "1000000"))

    # Verification suite
    SANDWICH_SLACK = Fraction(1, 100)
    LAMBDA_WINDOW_TOLERANCE = Fraction(5, 100)
    ZERO_PATTERN_LENGTH = 4
    DIVERGENCE_DECADES = (10**2, 10**3, 10**4, 10**5)

    # Concurrency settings
    MAX_WORKERS = int(os.getenv("DYADIC_ORBITS_MAX_WORKERS", "2"))

    @classmethod
    def epsilon(cls) -> Fraction:
        """Default per-series relative width target, 2^-EPSILON_BITS."""
        return Fraction(1, 2**cls.EPSILON_BITS)

    @classmethod
    def apply_args(cls, args):
        """Apply process-wide CLI arguments to config.

        Per-run numeric settings (guard, epsilon, bit budget) travel in the
        RunConfig instead, so repeated runs in one process stay independent.
        """
        if getattr(args, "log_level", None):
            cls.LOG_LEVEL = args.log_level.upper()
        if getattr(args, "jobs", None):
            cls.MAX_WORKERS = args.jobs


def epsilon_bits(text: str) -> int:
    """Parse ``2^-k`` (or a bare ``k``) into k."""
    cleaned = text.strip().replace(" ", "")
    if cleaned.startswith("2^-"):
        cleaned = cleaned[3:]
    if not cleaned.isdigit() or int(cleaned) < 1:
        raise argparse.ArgumentTypeError(f"epsilon must look like 2^-k with k >= 1, got {text!r}")
    return int(cleaned)


def _common_options(parser: argparse.ArgumentParser):
    parser.add_argument("--guard", type=int, default=None,
                        help="Max undeclared run of equal digits (default: 64)")
    parser.add_argument("--bit-budget", type=int, default=None,
                        help="Abort when a single term exceeds 2^budget (default: 10^6)")
    parser.add_argument("--epsilon", type=epsilon_bits, default=None,
                        help="Relative width target in 2^-k notation (default: 2^-40)")
    parser.add_argument("--log-level", type=str, default=None,
                        help="Logging level (default: INFO)")
    parser.add_argument("--error-json", action="store_true",
                        help="Print a structured error object on stdout on failure")
    parser.add_argument("--out", type=Path, default=None,
                        help="Output path (default: stdout)")


def parse_args(argv: Optional[List[str]] = None):
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(
        prog="dyadic-orbits",
        description="Dyadic Orbits - rigorous orbit-growth analysis for the binary system",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Export digits of a stream as ASCII 0/1")
    gen.add_argument("--spec", type=str, required=True)
    gen.add_argument("--digits", type=int, required=True)
    _common_options(gen)

    analyze = sub.add_parser("analyze", help="Orbit sums and estimators at checkpoints")
    analyze.add_argument("--spec", type=str, required=True)
    analyze.add_argument("--p", type=str, required=True)
    analyze.add_argument("--n-max", type=int, required=True)
    analyze.add_argument("--schedule", choices=["log", "blocks", "all"], default="all")
    analyze.add_argument("--format", choices=["csv", "json"], default="csv")
    analyze.add_argument("--dual", action="store_true",
                         help="Sum f^(k-1)(x)^p instead of its reciprocal")
    _common_options(analyze)

    verify = sub.add_parser("verify", help="Machine-check the inequalities on one stream")
    verify.add_argument("--spec", type=str, required=True)
    verify.add_argument("--p", type=str, required=True)
    verify.add_argument("--n-max", type=int, required=True)
    verify.add_argument("--schedule", choices=["log", "blocks", "all"], default="all")
    verify.add_argument("--theorem3", action="store_true",
                        help="Also check divergence of averages across decades")
    verify.add_argument("--bound", type=str, default=None,
                        help="Also check bounded averages A_p(n) <= BOUND")
    verify.add_argument("--theorem5", action="store_true",
                        help="Also check that A/Lambda stays in a stable window")
    verify.add_argument("--include-initial", action="store_true",
                        help="Include K0, J1, K1 in sandwich extrema")
    _common_options(verify)

    normality = sub.add_parser("normality", help="Digit and pattern frequency diagnostics")
    normality.add_argument("--spec", type=str, required=True)
    normality.add_argument("--n-max", type=int, required=True)
    normality.add_argument("--pattern-length", type=int, default=2)
    normality.add_argument("--j-max", type=int, default=None)
    _common_options(normality)

    sweep = sub.add_parser("sweep", help="verify over the cartesian product of specs and p values")
    sweep.add_argument("--spec", type=str, action="append", required=True)
    sweep.add_argument("--p-list", type=str, required=True)
    sweep.add_argument("--n-max", type=int, required=True)
    sweep.add_argument("--schedule", choices=["log", "blocks", "all"], default="all")
    sweep.add_argument("--jobs", type=int, default=None,
                       help="Worker processes (default: 2)")
    _common_options(sweep)

    return parser.parse_args(argv)


config = Config()
