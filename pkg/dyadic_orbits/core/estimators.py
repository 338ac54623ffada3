"""Block-length estimators Phi, Psi, Upsilon and Lambda.

With L_j = l_1 + ... + l_j, M_j = m_1 + ... + m_j (m_0 excluded) and
P_j = 2^{p l_1} + ... + 2^{p l_j}, for j >= 2:

    Phi  on J_j = (P_j + M_{j-1}) / (L_j + M_{j-1})
    Phi  on K_j = (P_j + M_{j-1}) / (L_j + M_j)
    Psi  on J_j = (P_j + M_{j-1}) / (L_{j-1} + M_{j-1})
    Psi  on K_j = (P_j + M_j) / (L_j + M_{j-1})
    Ups  on J_j = 1 + l_j / (L_{j-1} + M_{j-1})
    Ups  on K_j = (1 + m_j / (P_j + M_{j-1})) * (1 + m_j / (L_j + M_{j-1}))

and all three equal 1 on K0, J_1 and K_1. Lambda is 1 on K0 and P_j / L_j
on J_j and K_j for j >= 1.

Integer p with p * max(l) inside the bit budget evaluates exactly in
Fractions; anything else evaluates in DyadicInterval arithmetic, where the
unbounded mpf exponent carries 2^{p l} for factorial-sized l.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple, Union

from ..config import config
from ..errors import MismatchedCheckpoints, OutOfRange
from ..storage.models import RegionTag
from .blocks import BlockDecomposition, Region, cumulative
from .dyadic import ONE, DyadicInterval, working_precision
from .orbit import Exponent, OrbitSumSeries

logger = logging.getLogger(__name__)

Value = Union[Fraction, DyadicInterval]


def as_interval(value: Value, prec: int = 64) -> DyadicInterval:
    if isinstance(value, DyadicInterval):
        return value
    return DyadicInterval.from_fraction(value, prec)


class EstimatorContext:
    """Cumulative block sums of one decomposition for one exponent."""

    def __init__(self, decomp: BlockDecomposition, p, bit_budget: Optional[int] = None,
                 prec: Optional[int] = None):
        self.decomp = decomp
        self.p = Exponent.parse(p)
        budget = bit_budget if bit_budget is not None else config.BIT_BUDGET
        lengths = [length for length, _ones in decomp.runs]
        self.exact = self.p.is_integer and self.p.num * max(lengths, default=0) <= budget
        self.prec = prec if prec is not None else working_precision(config.epsilon()) + 32
        self.L = cumulative(lengths)
        self.M = cumulative([ones for _length, ones in decomp.runs])
        if self.exact:
            self.P = cumulative([2 ** (self.p.num * length) for length in lengths])
        else:
            self.P = [DyadicInterval.point(0)]
            for length in lengths:
                term = DyadicInterval.two_power(self.p.value * length, self.prec)
                self.P.append(self.P[-1].add(term, self.prec))

    # -- value arithmetic ------------------------------------------------------
    def _plus(self, power_sum, extra: int) -> Value:
        if self.exact:
            return Fraction(power_sum + extra)
        return power_sum.add(DyadicInterval.point(extra), self.prec)

    def _ratio(self, numerator: Value, denominator: int) -> Value:
        if self.exact:
            return Fraction(numerator) / denominator
        return numerator.div_int(denominator, self.prec)

    def _one_plus(self, small: int, big: Value) -> Value:
        """1 + small / big."""
        if self.exact:
            return 1 + Fraction(small) / big
        return ONE.add(DyadicInterval.point(small).div(as_interval(big, self.prec), self.prec), self.prec)

    def _times(self, left: Value, right: Value) -> Value:
        if self.exact:
            return left * right
        return as_interval(left, self.prec).mul(as_interval(right, self.prec), self.prec)

    def _one(self) -> Value:
        return Fraction(1) if self.exact else ONE

    # -- regions -----------------------------------------------------------------
    def region(self, n: int) -> Region:
        region = self.decomp.locate(n)
        if region.tag == RegionTag.K and not self.decomp.ones_closed(region.j):
            raise OutOfRange(f"C_{region.j} holding n={n} is not closed; materialize more digits")
        return region

    @staticmethod
    def _initial(region: Region) -> bool:
        return region.tag == RegionTag.K0 or region.j == 1

    # -- estimators ----------------------------------------------------------------
    def phi(self, n: int) -> Value:
        region = self.region(n)
        if self._initial(region):
            return self._one()
        j = region.j
        numerator = self._plus(self.P[j], self.M[j - 1])
        if region.tag == RegionTag.J:
            return self._ratio(numerator, self.L[j] + self.M[j - 1])
        return self._ratio(numerator, self.L[j] + self.M[j])

    def psi(self, n: int) -> Value:
        region = self.region(n)
        if self._initial(region):
            return self._one()
        j = region.j
        if region.tag == RegionTag.J:
            return self._ratio(self._plus(self.P[j], self.M[j - 1]), self.L[j - 1] + self.M[j - 1])
        return self._ratio(self._plus(self.P[j], self.M[j]), self.L[j] + self.M[j - 1])

    def upsilon(self, n: int) -> Value:
        region = self.region(n)
        if self._initial(region):
            return self._one()
        j = region.j
        if region.tag == RegionTag.J:
            return self._one_plus(self.decomp.l(j), Fraction(self.L[j - 1] + self.M[j - 1]))
        ones = self.decomp.m(j)
        left = self._one_plus(ones, self._plus(self.P[j], self.M[j - 1]))
        right = self._one_plus(ones, Fraction(self.L[j] + self.M[j - 1]))
        return self._times(left, right)

    def lambda_fn(self, n: int) -> Value:
        region = self.region(n)
        if region.tag == RegionTag.K0:
            return self._one()
        j = region.j
        return self._ratio(self._plus(self.P[j], 0), self.L[j])

    def phi_from_lambda(self, n: int) -> Value:
        """Phi rebuilt from Lambda with a_j = L_j / M_{j-1} and q_j = L_j / M_j."""
        region = self.region(n)
        if self._initial(region):
            return self._one()
        j = region.j
        lam = self.lambda_fn(n)
        a = Fraction(self.L[j], self.M[j - 1])
        if region.tag == RegionTag.J:
            numerator = self._plus_fraction(self._times(lam, a), Fraction(1))
            return self._div_fraction(numerator, a + 1)
        q = Fraction(self.L[j], self.M[j])
        numerator = self._plus_fraction(lam, 1 / a)
        return self._div_fraction(numerator, 1 + 1 / q)

    def _plus_fraction(self, value: Value, extra: Fraction) -> Value:
        if self.exact:
            return value + extra
        return as_interval(value, self.prec).add(DyadicInterval.from_fraction(extra, self.prec), self.prec)

    def _div_fraction(self, value: Value, divisor: Fraction) -> Value:
        if self.exact:
            return value / divisor
        return as_interval(value, self.prec).div(DyadicInterval.from_fraction(divisor, self.prec), self.prec)

    def assumption_sup(self, j_max: int) -> Tuple[Fraction, int]:
        """max over 2 <= j <= j_max of max(l_j / (L_{j-1} + M_{j-1}), m_j / (L_j + M_{j-1})).

        Returns the value and the j where it is first attained.
        """
        if j_max < 2:
            raise ValueError(f"j_max must be >= 2, got {j_max}")
        if j_max > self.decomp.closed_blocks:
            raise OutOfRange(f"need {j_max} closed blocks, decomposition has {self.decomp.closed_blocks}")
        best, attained = Fraction(0), 2
        for j in range(2, j_max + 1):
            ratio = max(
                Fraction(self.decomp.l(j), self.L[j - 1] + self.M[j - 1]),
                Fraction(self.decomp.m(j), self.L[j] + self.M[j - 1]),
            )
            if ratio > best:
                best, attained = ratio, j
        return best, attained


# -- module-level operations ---------------------------------------------------
def phi(decomp: BlockDecomposition, p, n: int) -> Value:
    return EstimatorContext(decomp, p).phi(n)


def psi(decomp: BlockDecomposition, p, n: int) -> Value:
    return EstimatorContext(decomp, p).psi(n)


def upsilon(decomp: BlockDecomposition, p, n: int) -> Value:
    return EstimatorContext(decomp, p).upsilon(n)


def lambda_fn(decomp: BlockDecomposition, p, n: int) -> Value:
    return EstimatorContext(decomp, p).lambda_fn(n)


def phi_from_lambda(decomp: BlockDecomposition, p, n: int) -> Value:
    return EstimatorContext(decomp, p).phi_from_lambda(n)


def assumption_sup(decomp: BlockDecomposition, j_max: int) -> Tuple[Fraction, int]:
    # The condition does not involve p.
    return EstimatorContext(decomp, 1).assumption_sup(j_max)


@dataclass(frozen=True)
class TraceEntry:
    n: int
    region: Region
    phi: Value
    psi: Value
    upsilon: Value
    lam: Value


@dataclass
class EstimatorTrace:
    p: Exponent
    exact: bool
    entries: List[TraceEntry] = field(default_factory=list)

    @property
    def ns(self) -> List[int]:
        return [entry.n for entry in self.entries]


def build_trace(decomp: BlockDecomposition, p, ns: Iterable[int],
                context: Optional[EstimatorContext] = None) -> EstimatorTrace:
    """Evaluate all four estimators at each n."""
    ctx = context or EstimatorContext(decomp, p)
    trace = EstimatorTrace(p=ctx.p, exact=ctx.exact)
    for n in ns:
        trace.entries.append(TraceEntry(
            n=n,
            region=ctx.region(n),
            phi=ctx.phi(n),
            psi=ctx.psi(n),
            upsilon=ctx.upsilon(n),
            lam=ctx.lambda_fn(n),
        ))
    logger.debug(f"Built estimator trace for p={ctx.p} at {len(trace.entries)} points "
                 f"({'exact' if ctx.exact else 'interval'} mode)")
    return trace


@dataclass(frozen=True)
class SandwichRatios:
    """Outward-rounded extremes of A/Phi and A/Psi over the used checkpoints."""

    inf_a_over_phi: Optional[Fraction]
    sup_a_over_psi: Optional[Fraction]
    sup_a_over_phi: Optional[Fraction]
    points: int
    inf_at: Optional[int] = None
    sup_at: Optional[int] = None


def sandwich_ratios(series: OrbitSumSeries, trace: EstimatorTrace,
                    include_initial: bool = False, prec: int = 96) -> SandwichRatios:
    """inf A/Phi (from A.lo), sup A/Psi and sup A/Phi (from A.hi).

    Checkpoints in K0, J_1 and K_1 are skipped unless include_initial.

    Raises:
        MismatchedCheckpoints: series and trace are not aligned.
    """
    if series.ns != trace.ns:
        raise MismatchedCheckpoints(
            f"series has {len(series.ns)} checkpoints, trace has {len(trace.ns)}; they must coincide"
        )
    inf_phi = sup_psi = sup_phi = None
    inf_at = sup_at = None
    used = 0
    for point, entry in zip(series.checkpoints, trace.entries):
        if not include_initial and (entry.region.tag == RegionTag.K0 or entry.region.j == 1):
            continue
        used += 1
        over_phi = point.A.div(as_interval(entry.phi, prec), prec)
        over_psi = point.A.div(as_interval(entry.psi, prec), prec)
        low = over_phi.lo_fraction()
        if inf_phi is None or low < inf_phi:
            inf_phi, inf_at = low, point.n
        high = over_psi.hi_fraction()
        if sup_psi is None or high > sup_psi:
            sup_psi, sup_at = high, point.n
        high_phi = over_phi.hi_fraction()
        if sup_phi is None or high_phi > sup_phi:
            sup_phi = high_phi
    return SandwichRatios(inf_phi, sup_psi, sup_phi, used, inf_at, sup_at)


def value_at_most(value: Value, bound: Value, prec: int = 96) -> bool:
    """value <= bound for certain (interval values compare hi against lo)."""
    if isinstance(value, Fraction) and isinstance(bound, Fraction):
        return value <= bound
    return as_interval(value, prec).certainly_at_most(as_interval(bound, prec))


def values_agree(left: Value, right: Value, prec: int = 96) -> bool:
    """Exact equality for Fractions, overlapping enclosures otherwise."""
    if isinstance(left, Fraction) and isinstance(right, Fraction):
        return left == right
    return as_interval(left, prec).intersects(as_interval(right, prec))
