"""Rigorous orbit sums S_p(n) = sum_{k<=n} 1/f^{k-1}(x)^p and their averages.

f^{k-1}(x) = 0.d_k d_{k+1} ... in binary, so reading m digits from d_k
encloses it in [a/2^m, (a+1)/2^m]. Terms are enclosed with outward
rounding and accumulated in DyadicInterval arithmetic.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Union

from ..config import config
from ..errors import OverflowBudget
from ..storage.models import ScheduleKind
from .blocks import BlockDecomposition
from .digits import DigitStream
from .dyadic import DyadicInterval, working_precision

logger = logging.getLogger(__name__)

# Lookahead bits added per refinement round.
REFINE_STEP = 8


@dataclass(frozen=True)
class Exponent:
    """The exponent p > 0 as a reduced fraction."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den <= 0 or self.num <= 0:
            raise ValueError(f"exponent must be a positive rational, got {self.num}/{self.den}")
        common = math.gcd(self.num, self.den)
        if common != 1:
            object.__setattr__(self, "num", self.num // common)
            object.__setattr__(self, "den", self.den // common)

    @classmethod
    def parse(cls, text: Union[str, int, Fraction, "Exponent"]) -> "Exponent":
        """Accept 2, "2", "3/2" or a Fraction; decimal literals are rejected."""
        if isinstance(text, Exponent):
            return text
        if isinstance(text, str):
            cleaned = text.strip()
            if any(char in cleaned for char in ".eE"):
                raise ValueError(f"exponent must be an integer or a ratio of integers, got {text!r}")
            text = Fraction(cleaned)
        value = Fraction(text)
        return cls(value.numerator, value.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def is_integer(self) -> bool:
        return self.den == 1

    def __str__(self) -> str:
        return str(self.num) if self.is_integer else f"{self.num}/{self.den}"


@dataclass(frozen=True)
class Checkpoint:
    n: int
    S: DyadicInterval
    A: DyadicInterval


@dataclass
class OrbitSumSeries:
    """Enclosures of S_p(n) and A_p(n) at the scheduled checkpoints."""

    p: Exponent
    epsilon: Fraction
    checkpoints: List[Checkpoint] = field(default_factory=list)
    dual: bool = False

    @property
    def ns(self) -> List[int]:
        return [point.n for point in self.checkpoints]

    def at(self, n: int) -> Checkpoint:
        for point in self.checkpoints:
            if point.n == n:
                return point
        raise KeyError(n)

    @property
    def last(self) -> Checkpoint:
        return self.checkpoints[-1]


def _lookahead_bits(p: Exponent, epsilon: Fraction) -> int:
    """Extra digits past the first 1 so that the tail's width costs <= epsilon/2."""
    target = Fraction(8 * p.num, p.den) / epsilon
    return math.ceil(target).bit_length()


def tail_interval(stream: DigitStream, k: int, m: int, zero_run: Optional[int] = None) -> DyadicInterval:
    """Enclosure [a/2^m, (a+1)/2^m] of f^{k-1}(x) from the digits d_k..d_{k+m-1}.

    A known leading zero run lets the integer read skip those digits.
    """
    if m < 1:
        raise ValueError(f"lookahead must be >= 1, got {m}")
    skip = min(zero_run or 0, m - 1)
    a = stream.tail_integer(k + skip, m - skip)
    return DyadicInterval.from_man_exp(a, a + 1, -m)


def term_interval(stream: DigitStream, k: int, p, epsilon: Optional[Fraction] = None,
                  bit_budget: Optional[int] = None, zero_run: Optional[int] = None,
                  dual: bool = False) -> DyadicInterval:
    """Enclosure of 1/f^{k-1}(x)^p (or f^{k-1}(x)^p when dual) with relative width <= epsilon.

    Raises:
        OverflowBudget: the term's magnitude exceeds 2^bit_budget.
        GuardExceeded: propagated from the digit stream.
    """
    p = Exponent.parse(p)
    epsilon = epsilon if epsilon is not None else config.epsilon()
    bit_budget = bit_budget if bit_budget is not None else config.BIT_BUDGET
    zeros = stream.zero_run_at(k) if zero_run is None else zero_run
    if p.value * (zeros + 1) > bit_budget:
        logger.warning(f"Term {k} of {stream.label} needs 2^{p.value * (zeros + 1)}, over budget {bit_budget}")
        raise OverflowBudget(
            f"term {k} has magnitude up to 2^{p.value * (zeros + 1)}, above the bit budget 2^{bit_budget}"
        )
    prec = working_precision(epsilon)
    power = p.value if dual else -p.value
    extra = _lookahead_bits(p, epsilon)
    while True:
        tail = tail_interval(stream, k, zeros + 1 + extra, zero_run=zeros)
        term = tail.pow(power, prec)
        if term.relative_width_at_most(epsilon):
            return term
        extra += REFINE_STEP
        logger.debug(f"Refining term {k} of {stream.label}: lookahead {zeros + 1 + extra}")


def iter_terms(stream: DigitStream, p: Exponent, start: int, stop: int, epsilon: Fraction,
                bit_budget: Optional[int], dual: bool):
    """Yield (k, term) for k = start..stop, carrying zero-run lengths forward."""
    zeros = None
    for k in range(start, stop + 1):
        if zeros is None or zeros == 0:
            zeros = stream.zero_run_at(k)
        else:
            zeros -= 1
        yield k, term_interval(stream, k, p, epsilon, bit_budget, zero_run=zeros, dual=dual)


def range_sum(stream: DigitStream, p, start: int, stop: int, epsilon: Optional[Fraction] = None,
              bit_budget: Optional[int] = None, dual: bool = False) -> DyadicInterval:
    """Enclosure of the sum of terms k = start..stop.

    Sums over disjoint ranges merge by interval addition.
    """
    p = Exponent.parse(p)
    epsilon = epsilon if epsilon is not None else config.epsilon()
    prec = working_precision(epsilon) + max(stop - start + 1, 1).bit_length() + 8
    total = DyadicInterval.point(0)
    for _k, term in iter_terms(stream, p, start, stop, epsilon / 2, bit_budget, dual):
        total = total.add(term, prec)
    return total


def log_grid(n_max: int) -> List[int]:
    """1..10, 20..100, 200..1000, ... up to n_max, plus n_max itself."""
    points = set()
    decade = 1
    while decade <= n_max:
        points.update(range(decade, min(10 * decade, n_max) + 1, decade))
        decade *= 10
    points.add(n_max)
    return sorted(points)


def build_schedule(kind: str, n_max: int, decomp: Optional[BlockDecomposition] = None) -> List[int]:
    """Checkpoints for a schedule kind; block boundaries need the decomposition."""
    if kind not in (ScheduleKind.LOG, ScheduleKind.BLOCKS, ScheduleKind.ALL):
        raise ValueError(f"unknown schedule {kind!r}")
    points = {n_max}
    if kind in (ScheduleKind.LOG, ScheduleKind.ALL):
        points.update(log_grid(n_max))
    if kind in (ScheduleKind.BLOCKS, ScheduleKind.ALL):
        if decomp is None:
            raise ValueError("block schedule needs a block decomposition")
        points.update(decomp.boundaries(n_max))
    return sorted(points)


def _accumulate(stream: DigitStream, p: Exponent, n_max: int, epsilon: Fraction,
                schedule: Optional[Iterable[int]], bit_budget: Optional[int],
                dual: bool) -> OrbitSumSeries:
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    marks = set(schedule) if schedule is not None else set(log_grid(n_max))
    prec = working_precision(epsilon) + n_max.bit_length() + 8
    series = OrbitSumSeries(p=p, epsilon=epsilon, dual=dual)
    total = DyadicInterval.point(0)
    for k, term in iter_terms(stream, p, 1, n_max, epsilon / 2, bit_budget, dual):
        total = total.add(term, prec)
        if k in marks:
            series.checkpoints.append(Checkpoint(k, total, total.div_int(k, prec)))
    kind = "dual sums" if dual else "sums"
    logger.info(f"Computed {kind} of {stream.label} for p={p} through n={n_max} "
                f"({len(series.checkpoints)} checkpoints)")
    return series


def prefix_sums(stream: DigitStream, p, n_max: int, epsilon: Optional[Fraction] = None,
                schedule: Optional[Iterable[int]] = None,
                bit_budget: Optional[int] = None) -> OrbitSumSeries:
    """Running enclosures of S_p(n) and A_p(n) at the scheduled n.

    Each term gets relative width epsilon/2, so every S enclosure has
    relative width <= epsilon. The schedule defaults to the log grid.
    """
    p = Exponent.parse(p)
    epsilon = epsilon if epsilon is not None else config.epsilon()
    return _accumulate(stream, p, n_max, epsilon, schedule, bit_budget, dual=False)


def dual_prefix_sums(stream: DigitStream, p, n_max: int, epsilon: Optional[Fraction] = None,
                     schedule: Optional[Iterable[int]] = None,
                     bit_budget: Optional[int] = None) -> OrbitSumSeries:
    """As prefix_sums, but summing f^{k-1}(x)^p; every S.hi stays <= n."""
    p = Exponent.parse(p)
    epsilon = epsilon if epsilon is not None else config.epsilon()
    return _accumulate(stream, p, n_max, epsilon, schedule, bit_budget, dual=True)


def orbit_points(num: int, den: int, n: int) -> List[Fraction]:
    """Exact x, f(x), ..., f^{n-1}(x) for x = num/den."""
    x = Fraction(num, den)
    points = []
    for _ in range(n):
        points.append(x)
        x = 2 * x if 2 * x < 1 else 2 * x - 1
    return points


def exact_oracle(num: int, den: int, p: int, n: int, dual: bool = False) -> Fraction:
    """Exact S_p(n) for a rational point (or the dual sum when dual)."""
    if isinstance(p, bool) or not isinstance(p, int) or p < 1:
        raise ValueError(f"the exact oracle needs a positive integer p, got {p!r}")
    if dual:
        return sum((x**p for x in orbit_points(num, den, n)), Fraction(0))
    return sum((1 / x**p for x in orbit_points(num, den, n)), Fraction(0))


def lemma_term_bounds(length: int, q: int, p, prec: int = 64):
    """Bounds 2^{p(l-q+1)} <= 1/f^{k-1}(x)^p <= 2^{p(l-q+2)} for k at offset q of a zero block."""
    p = Exponent.parse(p)
    lower = DyadicInterval.two_power(p.value * (length - q + 1), prec)
    upper = DyadicInterval.two_power(p.value * (length - q + 2), prec)
    return lower, upper


def upper_constant(p, prec: int = 64) -> DyadicInterval:
    """C* = 2^{2p} / (2^p - 1), the upper constant of the block and prefix bounds."""
    p = Exponent.parse(p)
    numerator = DyadicInterval.two_power(2 * p.value, prec + 10)
    denominator = DyadicInterval.two_power(p.value, prec + 10).sub(DyadicInterval.point(1), prec + 10)
    return numerator.div(denominator, prec)


def upper_constant_exact(p) -> Optional[Fraction]:
    """C* as a Fraction for integer p, None otherwise."""
    p = Exponent.parse(p)
    if not p.is_integer:
        return None
    return Fraction(2 ** (2 * p.num), 2**p.num - 1)
