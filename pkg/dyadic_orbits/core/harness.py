"""Verification suite: machine-checks the block and orbit-sum inequalities.

Each check returns a CheckReport. Margins are signed log2 ratios between
the bound and the enclosure endpoint it was compared with (negative means
violated). Lower bounds are tested against enclosure lower endpoints and
upper bounds against upper endpoints where the bound is strict in theory;
prefix and boundedness checks only flag a violation when the whole
enclosure is on the wrong side.
"""

import logging
import sys
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional

from ..config import config
from ..errors import OrbitError, OutOfRange
from ..storage.models import CheckReport, RegionTag, RunConfig, RunReport, ScheduleKind
from .blocks import BlockDecomposition, decompose_stream
from .digits import DigitPrefix, DigitStream
from .dyadic import DyadicInterval
from .estimators import (
    EstimatorContext,
    EstimatorTrace,
    as_interval,
    build_trace,
    sandwich_ratios,
    value_at_most,
    values_agree,
)
from .normality import running_pattern_counts, zero_count_bounds
from .orbit import (
    Exponent,
    OrbitSumSeries,
    build_schedule,
    dual_prefix_sums,
    iter_terms,
    lemma_term_bounds,
    prefix_sums,
    upper_constant,
)

logger = logging.getLogger(__name__)

MARGIN_PREC = 53


def log2_mid(value) -> float:
    """Midpoint of a log2 enclosure, as a float."""
    return as_interval(value, 96).log2(MARGIN_PREC).midpoint_float()


def _signed(margin: float, ok: bool) -> float:
    # Keep the sign consistent with the rigorous verdict.
    return max(margin, 0.0) if ok else min(margin, -sys.float_info.epsilon)


class _Tally:
    """Accumulates violations and the worst margin of one check."""

    def __init__(self, check: str, n_max: int, n_min: int = 1):
        self.check = check
        self.n_min = n_min
        self.n_max = n_max
        self.violations = 0
        self.worst: Optional[float] = None
        self.first: Optional[int] = None
        self.checked = 0

    def record(self, n: int, ok: bool, margin: Optional[float] = None):
        self.checked += 1
        if margin is not None:
            margin = _signed(margin, ok)
            if self.worst is None or margin < self.worst:
                self.worst = margin
        if not ok:
            self.violations += 1
            if self.first is None:
                self.first = n

    def report(self, **details) -> CheckReport:
        details.setdefault("checked", self.checked)
        report = CheckReport(
            check=self.check,
            n_min=self.n_min,
            n_max=self.n_max,
            violations=self.violations,
            worst_margin=self.worst,
            first_violation=self.first,
            passed=self.violations == 0,
            details=details,
        )
        if report.passed:
            logger.info(f"{self.check}: pass ({self.checked} checks)")
        else:
            logger.warning(f"{self.check}: {self.violations} violations, first at n={self.first}")
        return report


class StreamAnalysis:
    """Shared, lazily computed state for all checks on one (stream, p, n_max)."""

    def __init__(self, stream: DigitStream, p, n_max: int, epsilon: Optional[Fraction] = None,
                 schedule: str = ScheduleKind.ALL, bit_budget: Optional[int] = None,
                 include_initial: bool = False):
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")
        self.stream = stream
        self.p = Exponent.parse(p)
        self.n_max = n_max
        self.epsilon = epsilon if epsilon is not None else config.epsilon()
        self.schedule_kind = schedule
        self.bit_budget = bit_budget
        self.include_initial = include_initial

    @cached_property
    def decomp(self) -> BlockDecomposition:
        return decompose_stream(self.stream, self.n_max)

    @cached_property
    def schedule(self) -> List[int]:
        return build_schedule(self.schedule_kind, self.n_max, self.decomp)

    @cached_property
    def series(self) -> OrbitSumSeries:
        return prefix_sums(self.stream, self.p, self.n_max, self.epsilon, self.schedule, self.bit_budget)

    @cached_property
    def context(self) -> EstimatorContext:
        return EstimatorContext(self.decomp, self.p, self.bit_budget)

    @cached_property
    def trace(self) -> EstimatorTrace:
        return build_trace(self.decomp, self.p, self.schedule, self.context)

    @cached_property
    def c_star(self) -> DyadicInterval:
        return upper_constant(self.p, 96)

    def prefix(self, extra: int = 0) -> DigitPrefix:
        return self.stream.materialize(self.n_max + extra)

    def terms(self):
        return iter_terms(self.stream, self.p, 1, self.n_max, self.epsilon / 2, self.bit_budget, False)


class VerificationSuite:
    """Runs inequality checks; a failing check never stops the suite."""

    # -- block bounds ------------------------------------------------------------
    def verify_lemma_bounds(self, analysis: StreamAnalysis) -> CheckReport:
        """Every closed zero block sums into [2^{pl}, C* 2^{pl}]; every closed ones
        block has partial sums over its first r indices in [r, 2^p m]."""
        decomp, p = analysis.decomp, analysis.p
        tally = _Tally("lemma_bounds", analysis.n_max)
        c_star = analysis.c_star
        two_p = DyadicInterval.two_power(p.value, 96)
        zero_blocks = ones_blocks = 0
        partial = DyadicInterval.point(0)
        for k, term in analysis.terms():
            region = decomp.locate(k)
            if region.q == 1:
                partial = DyadicInterval.point(0)
            partial = partial.add(term, 128)
            size = decomp.region_size(region)
            if region.tag == RegionTag.J:
                if region.q == size:
                    zero_blocks += 1
                    lower = DyadicInterval.two_power(p.value * size, 96)
                    upper = c_star.mul(lower, 96)
                    low_ok = lower.certainly_at_most(DyadicInterval(partial.lo, partial.lo))
                    high_ok = partial.certainly_at_most(upper)
                    margin = min(log2_mid(partial) - log2_mid(lower), log2_mid(upper) - log2_mid(partial))
                    tally.record(k, low_ok and high_ok, margin)
                continue
            closed = decomp.ones_closed(region.j) if region.tag == RegionTag.K else \
                (decomp.block_count > 0 or decomp.open_run is not None)
            if not closed:
                continue
            if region.q == size:
                ones_blocks += 1
            upper = two_p.mul(DyadicInterval.point(size), 96)
            ok = partial.lo_at_least(region.q) and partial.certainly_at_most(upper)
            margin = min(log2_mid(partial) - log2_mid(Fraction(region.q)), log2_mid(upper) - log2_mid(partial))
            tally.record(k, ok, margin)
        return tally.report(zero_blocks=zero_blocks, ones_blocks=ones_blocks)

    def verify_term_bounds(self, analysis: StreamAnalysis) -> CheckReport:
        """Each term inside a zero block lies in [2^{p(l-q+1)}, 2^{p(l-q+2)}]."""
        decomp, p = analysis.decomp, analysis.p
        tally = _Tally("term_bounds", analysis.n_max)
        for k, term in analysis.terms():
            region = decomp.locate(k)
            if region.tag != RegionTag.J:
                continue
            lower, upper = lemma_term_bounds(decomp.l(region.j), region.q, p, 96)
            ok = lower.certainly_at_most(DyadicInterval(term.lo, term.lo)) and term.certainly_at_most(upper)
            margin = min(log2_mid(term) - log2_mid(lower), log2_mid(upper) - log2_mid(term))
            tally.record(k, ok, margin)
        return tally.report()

    # -- prefix inequalities -------------------------------------------------------
    def verify_prefix_inequalities(self, analysis: StreamAnalysis) -> CheckReport:
        """P_j + sum_{u<j} m_u <= S_p(n) <= C* (P_j + sum_{u<j} m_u) on J_j, with the
        upper sum running through m_j on K_j (m_0 included in both)."""
        decomp, ctx = analysis.decomp, analysis.context
        tally = _Tally("prefix_inequalities", analysis.n_max)
        c_star = analysis.c_star
        for point in analysis.series.checkpoints:
            region = decomp.locate(point.n)
            if region.tag == RegionTag.K0:
                continue
            j = region.j
            power_sum = as_interval(ctx.P[j], 96) if ctx.exact else ctx.P[j]
            ones_before = decomp.m0 + ctx.M[j - 1]
            ones_through = ones_before + (decomp.m(j) if region.tag == RegionTag.K else 0)
            lower = power_sum.add(DyadicInterval.point(ones_before), 96)
            upper = c_star.mul(power_sum.add(DyadicInterval.point(ones_through), 96), 96)
            lower_ok = not point.S.certainly_below(lower)
            upper_ok = not upper.certainly_below(point.S)
            margin = min(
                log2_mid(DyadicInterval(point.S.hi, point.S.hi)) - log2_mid(lower),
                log2_mid(upper) - log2_mid(DyadicInterval(point.S.lo, point.S.lo)),
            )
            tally.record(point.n, lower_ok and upper_ok, margin)
        return tally.report()

    # -- sandwich --------------------------------------------------------------------
    def verify_sandwich(self, analysis: StreamAnalysis) -> CheckReport:
        """inf A/Phi > 0 and sup A/Psi <= C* (1 + slack)."""
        series, trace = analysis.series, analysis.trace
        ratios = sandwich_ratios(series, trace, analysis.include_initial)
        tally = _Tally("sandwich", analysis.n_max)
        bound = analysis.c_star.mul(DyadicInterval.from_fraction(1 + config.SANDWICH_SLACK, 96), 96)
        bound_hi = bound.hi_fraction()
        for point, entry in zip(series.checkpoints, trace.entries):
            if not analysis.include_initial and (entry.region.tag == RegionTag.K0 or entry.region.j == 1):
                continue
            over_psi = point.A.div(as_interval(entry.psi, 96), 96)
            over_phi = point.A.div(as_interval(entry.phi, 96), 96)
            ok = over_psi.hi_at_most(bound_hi)
            tally.record(point.n, ok, log2_mid(bound) - log2_mid(over_psi))
        if ratios.inf_a_over_phi is not None and ratios.inf_a_over_phi <= 0:
            tally.record(ratios.inf_at, False)
        return tally.report(
            inf_a_over_phi=_as_float(ratios.inf_a_over_phi),
            sup_a_over_psi=_as_float(ratios.sup_a_over_psi),
            sup_a_over_phi=_as_float(ratios.sup_a_over_phi),
            inf_at=ratios.inf_at,
            sup_at=ratios.sup_at,
            c_star=_as_float(analysis.c_star.hi_fraction()),
            bound=_as_float(bound_hi),
            points=ratios.points,
        )

    # -- growth of averages ----------------------------------------------------------
    def verify_theorem3_divergence(self, analysis: StreamAnalysis) -> CheckReport:
        """A_p(n) strictly increases across decade checkpoints: lo at each decade
        exceeds hi at the previous one."""
        decades = [n for n in config.DIVERGENCE_DECADES if n <= analysis.n_max]
        if len(decades) < 2:
            raise OutOfRange(f"divergence check needs n_max >= {config.DIVERGENCE_DECADES[1]}")
        series = prefix_sums(analysis.stream, analysis.p, decades[-1], analysis.epsilon, decades,
                             analysis.bit_budget)
        tally = _Tally("theorem3_divergence", analysis.n_max, n_min=decades[0])
        averages = {point.n: point.A for point in series.checkpoints}
        for earlier, later in zip(decades, decades[1:]):
            previous, current = averages[earlier], averages[later]
            ok = previous.certainly_below(current)
            margin = log2_mid(DyadicInterval(current.lo, current.lo)) - log2_mid(DyadicInterval(previous.hi, previous.hi))
            tally.record(later, ok, margin)
        return tally.report(
            decades=decades,
            averages=[[n, _as_float(averages[n].lo_fraction()), _as_float(averages[n].hi_fraction())]
                      for n in decades],
        )

    def verify_theorem6_boundedness(self, analysis: StreamAnalysis, bound: Fraction) -> CheckReport:
        """A_p(n) <= bound at every n <= n_max; for equal bounded blocks l_j = m_j <= K
        also Lambda(n) <= 2^{pK}."""
        tally = _Tally("theorem6_boundedness", analysis.n_max)
        prec = 128
        total = DyadicInterval.point(0)
        sup_hi: Optional[Fraction] = None
        sup_at = None
        for k, term in analysis.terms():
            total = total.add(term, prec)
            average = total.div_int(k, prec)
            ok = average.lo_fraction() <= bound
            hi = average.hi_fraction()
            if sup_hi is None or hi > sup_hi:
                sup_hi, sup_at = hi, k
            tally.record(k, ok, log2_mid(bound) - log2_mid(DyadicInterval(average.lo, average.lo)))
        decomp = analysis.decomp
        runs = [pair for j, pair in enumerate(decomp.runs, start=1) if decomp.ones_closed(j)]
        equal_pairs = bool(runs) and all(length == ones for length, ones in runs)
        details: Dict[str, object] = {"bound": _as_float(bound), "sup_average": _as_float(sup_hi),
                                      "sup_at": sup_at, "equal_pairs": equal_pairs}
        if equal_pairs:
            block_max = max(length for length, _ones in runs)
            lambda_bound = DyadicInterval.two_power(analysis.p.value * block_max, 96)
            lambda_violations = 0
            for entry in analysis.trace.entries:
                if not value_at_most(entry.lam, lambda_bound):
                    lambda_violations += 1
                    tally.record(entry.n, False)
            details.update(block_max=block_max, lambda_bound=_as_float(lambda_bound.hi_fraction()),
                           lambda_violations=lambda_violations)
        return tally.report(**details)

    def verify_dual_bound(self, analysis: StreamAnalysis) -> CheckReport:
        """sum_{k<=n} f^{k-1}(x)^p <= n."""
        series = dual_prefix_sums(analysis.stream, analysis.p, analysis.n_max, analysis.epsilon,
                                  analysis.schedule, analysis.bit_budget)
        tally = _Tally("dual_bound", analysis.n_max)
        for point in series.checkpoints:
            ok = point.S.hi_at_most(point.n)
            tally.record(point.n, ok, log2_mid(Fraction(point.n)) - log2_mid(DyadicInterval(point.S.hi, point.S.hi)))
        return tally.report()

    # -- estimator structure -----------------------------------------------------------
    def verify_estimator_identities(self, analysis: StreamAnalysis) -> CheckReport:
        """Psi = Phi * Upsilon, Phi rebuilt from Lambda, Phi <= Psi and Lambda >= p."""
        ctx = analysis.context
        tally = _Tally("estimator_identities", analysis.n_max)
        failures = {"factorization": 0, "lambda_form": 0, "order": 0, "lambda_floor": 0}
        for entry in analysis.trace.entries:
            product = entry.phi * entry.upsilon if ctx.exact else \
                as_interval(entry.phi, ctx.prec).mul(as_interval(entry.upsilon, ctx.prec), ctx.prec)
            checks = {
                "factorization": values_agree(product, entry.psi),
                "lambda_form": values_agree(ctx.phi_from_lambda(entry.n), entry.phi),
                "order": _possibly_at_most(entry.phi, entry.psi),
                "lambda_floor": entry.region.tag == RegionTag.K0
                or _possibly_at_most(analysis.p.value, entry.lam),
            }
            for name, ok in checks.items():
                if not ok:
                    failures[name] += 1
            tally.record(entry.n, all(checks.values()))
        return tally.report(mode="exact" if ctx.exact else "interval", **failures)

    def verify_assumption(self, analysis: StreamAnalysis) -> CheckReport:
        """Report the boundedness condition's sup and check Upsilon <= (1 + sup)^2."""
        decomp = analysis.decomp
        tally = _Tally("assumption", analysis.n_max)
        j_max = min(decomp.closed_blocks, decomp.locate(analysis.n_max).j)
        if j_max < 2:
            return tally.report(j_max=j_max, note="fewer than two closed blocks")
        sup, attained = analysis.context.assumption_sup(j_max)
        ceiling = (1 + sup) ** 2
        upsilon_max = None
        for entry in analysis.trace.entries:
            if entry.region.j > j_max:
                continue
            if upsilon_max is None or log2_mid(entry.upsilon) > log2_mid(upsilon_max):
                upsilon_max = entry.upsilon
            tally.record(entry.n, _possibly_at_most(entry.upsilon, ceiling))
        return tally.report(
            j_max=j_max,
            assumption_sup=_as_float(sup),
            attained_j=attained,
            upsilon_max=_as_float(_upper(upsilon_max)),
            upsilon_ceiling=_as_float(ceiling),
        )

    def verify_theorem5_equivalence(self, analysis: StreamAnalysis) -> CheckReport:
        """A/Lambda stays in a window [r_min, r_max] with r_min > 0 whose endpoints move
        by at most the configured tolerance between n_max/2 and n_max."""
        series, trace = analysis.series, analysis.trace
        tally = _Tally("theorem5_equivalence", analysis.n_max)
        half = analysis.n_max // 2
        windows = {"half": [None, None], "full": [None, None]}
        for point, entry in zip(series.checkpoints, trace.entries):
            if entry.region.tag == RegionTag.K0 or entry.region.j == 1:
                continue
            ratio = point.A.div(as_interval(entry.lam, 96), 96)
            low, high = ratio.lo_fraction(), ratio.hi_fraction()
            keys = ("half", "full") if point.n <= half else ("full",)
            for key in keys:
                current = windows[key]
                current[0] = low if current[0] is None else min(current[0], low)
                current[1] = high if current[1] is None else max(current[1], high)
        full, halfway = windows["full"], windows["half"]
        if None in full or None in halfway:
            return tally.report(note="not enough checkpoints beyond the initial blocks")
        tolerance = config.LAMBDA_WINDOW_TOLERANCE
        drift_min = abs(full[0] - halfway[0]) / halfway[0]
        drift_max = abs(full[1] - halfway[1]) / halfway[1]
        tally.record(analysis.n_max, full[0] > 0)
        tally.record(analysis.n_max, drift_min <= tolerance, float(tolerance - drift_min))
        tally.record(analysis.n_max, drift_max <= tolerance, float(tolerance - drift_max))
        return tally.report(
            r_min=_as_float(full[0]), r_max=_as_float(full[1]),
            half_r_min=_as_float(halfway[0]), half_r_max=_as_float(halfway[1]),
            drift_min=_as_float(drift_min), drift_max=_as_float(drift_max),
        )

    # -- digit statistics ------------------------------------------------------------
    def verify_zero_pattern_bound(self, analysis: StreamAnalysis) -> CheckReport:
        """S_p(n) >= (n - c) + c 2^{rp}, c = number of length-r zero patterns starting at k <= n."""
        r = config.ZERO_PATTERN_LENGTH
        prefix = analysis.prefix(r - 1)
        pattern = "0" * r
        boost = DyadicInterval.two_power(r * analysis.p.value, 96)
        tally = _Tally("zero_pattern_bound", analysis.n_max)
        counts = running_pattern_counts(prefix, pattern, analysis.n_max)
        for point in analysis.series.checkpoints:
            count = int(counts[point.n - 1])
            bound = boost.mul(DyadicInterval.point(count), 96).add(DyadicInterval.point(point.n - count), 96)
            ok = not point.S.certainly_below(bound)
            tally.record(point.n, ok, log2_mid(DyadicInterval(point.S.hi, point.S.hi)) - log2_mid(bound))
        return tally.report(pattern_length=r)

    def verify_frequency_bounds(self, analysis: StreamAnalysis) -> CheckReport:
        """Zero counts read off the blocks match a digit scan and lie within the block bounds."""
        zeros = running_pattern_counts(analysis.prefix(), "0", analysis.n_max)
        ctx = analysis.context
        tally = _Tally("frequency_bounds", analysis.n_max)
        for n in analysis.schedule:
            bounds = zero_count_bounds(analysis.decomp, n, ctx.L, ctx.M)
            scanned = int(zeros[n - 1])
            ok = bounds.count == scanned and bounds.lower <= bounds.frequency <= bounds.upper
            tally.record(n, ok)
        return tally.report()

    # -- suite -----------------------------------------------------------------------
    def run_check(self, name: str, check, *args) -> CheckReport:
        """Run one check; errors become a failed report instead of propagating."""
        try:
            return check(*args)
        except OrbitError as exc:
            logger.error(f"{name} aborted: {exc}")
            return _error_report(name, args[0].n_max, exc.code, str(exc))
        except Exception as exc:
            logger.error(f"{name} failed unexpectedly: {exc}", exc_info=True)
            return _error_report(name, args[0].n_max, type(exc).__name__, str(exc))

    def run_suite(self, run: RunConfig) -> RunReport:
        """Open the stream of a RunConfig and run the general checks plus any requested ones."""
        p = Exponent.parse(run.p)
        epsilon = Fraction(1, 2**run.epsilon_bits)
        stream = DigitStream.from_text(run.spec, guard=run.guard)
        analysis = StreamAnalysis(stream, p, run.n_max, epsilon, run.schedule, run.bit_budget,
                                  run.include_initial)
        logger.info(f"Verifying {run.spec} with p={p} through n={run.n_max}")
        checks = [
            ("lemma_bounds", self.verify_lemma_bounds),
            ("term_bounds", self.verify_term_bounds),
            ("prefix_inequalities", self.verify_prefix_inequalities),
            ("sandwich", self.verify_sandwich),
            ("dual_bound", self.verify_dual_bound),
            ("estimator_identities", self.verify_estimator_identities),
            ("assumption", self.verify_assumption),
            ("zero_pattern_bound", self.verify_zero_pattern_bound),
            ("frequency_bounds", self.verify_frequency_bounds),
        ]
        if run.theorem3:
            checks.append(("theorem3_divergence", self.verify_theorem3_divergence))
        if run.theorem5:
            checks.append(("theorem5_equivalence", self.verify_theorem5_equivalence))
        reports = [self.run_check(name, check, analysis) for name, check in checks]
        if run.bound is not None:
            bound = Fraction(run.bound)
            reports.append(self.run_check("theorem6_boundedness", self.verify_theorem6_boundedness,
                                          analysis, bound))
        passed = all(report.passed for report in reports)
        logger.info(f"Suite for {run.spec} p={p}: {'pass' if passed else 'FAIL'}")
        return RunReport(spec=run.spec, p=str(p), n_max=run.n_max, epsilon=run.epsilon_text,
                         checks=reports, passed=passed)


def _error_report(name: str, n_max: int, code: str, message: str) -> CheckReport:
    return CheckReport(check=name, n_max=n_max, passed=False, error=code, details={"message": message})


def _as_float(value) -> Optional[float]:
    if value is None:
        return None
    try:
        return float(value)
    except OverflowError:
        return float("inf")


def _upper(value) -> Optional[Fraction]:
    if value is None or isinstance(value, Fraction):
        return value
    return value.hi_fraction()


def _possibly_at_most(left, right) -> bool:
    """left <= right is not refuted by the enclosures."""
    if isinstance(left, Fraction) and isinstance(right, Fraction):
        return left <= right
    return not as_interval(right, 96).certainly_below(as_interval(left, 96))


verification_suite = VerificationSuite()


# -- stream-level entry points ---------------------------------------------------------
def _analysis(stream: DigitStream, p, n_max: int, **options) -> StreamAnalysis:
    return StreamAnalysis(stream, p, n_max, **options)


def verify_lemma_bounds(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_lemma_bounds(_analysis(stream, p, n_max, **options))


def verify_prefix_inequalities(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_prefix_inequalities(_analysis(stream, p, n_max, **options))


def verify_sandwich(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_sandwich(_analysis(stream, p, n_max, **options))


def verify_theorem3_divergence(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_theorem3_divergence(_analysis(stream, p, n_max, **options))


def verify_theorem6_boundedness(stream: DigitStream, p, n_max: int, bound, **options) -> CheckReport:
    return verification_suite.verify_theorem6_boundedness(_analysis(stream, p, n_max, **options),
                                                          Fraction(bound))


def verify_dual_bound(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_dual_bound(_analysis(stream, p, n_max, **options))


def verify_estimator_identities(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_estimator_identities(_analysis(stream, p, n_max, **options))


def verify_assumption(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_assumption(_analysis(stream, p, n_max, **options))


def verify_theorem5_equivalence(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_theorem5_equivalence(_analysis(stream, p, n_max, **options))


def verify_zero_pattern_bound(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_zero_pattern_bound(_analysis(stream, p, n_max, **options))


def verify_frequency_bounds(stream: DigitStream, p, n_max: int, **options) -> CheckReport:
    return verification_suite.verify_frequency_bounds(_analysis(stream, p, n_max, **options))


def run_suite(run: RunConfig) -> RunReport:
    return verification_suite.run_suite(run)
