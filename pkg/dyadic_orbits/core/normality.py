"""Finite-prefix digit and pattern statistics.

Nothing here decides normality; the reports are evidence on a prefix.
Pattern occurrences follow the sliding-window count: starts k = 1..n,
overlaps allowed, so digits through n + r - 1 are read.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import InsufficientDigits, OutOfRange
from ..storage.models import RegionTag
from .blocks import BlockDecomposition, Region, cumulative
from .digits import DigitPrefix

logger = logging.getLogger(__name__)

Pattern = Union[str, bytes, Tuple[int, ...]]


def _pattern_bits(pattern: Pattern) -> np.ndarray:
    if isinstance(pattern, bytes):
        pattern = pattern.decode("ascii")
    if isinstance(pattern, str):
        if not pattern or set(pattern) - {"0", "1"}:
            raise ValueError(f"pattern must be a non-empty 0/1 string, got {pattern!r}")
        return np.frombuffer(pattern.encode("ascii"), dtype=np.uint8) - 48
    return np.asarray(pattern, dtype=np.uint8)


def _windows(prefix: DigitPrefix, r: int, n: int) -> np.ndarray:
    needed = n + r - 1
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if prefix.n < needed:
        raise InsufficientDigits(f"counting length-{r} patterns up to n={n} needs {needed} digits, have {prefix.n}")
    return sliding_window_view(prefix.array[:needed], r)


def _matches(prefix: DigitPrefix, pattern: Pattern, n: int) -> np.ndarray:
    bits = _pattern_bits(pattern)
    return np.all(_windows(prefix, bits.size, n) == bits, axis=1)


def pattern_count(prefix: DigitPrefix, pattern: Pattern, n: int) -> int:
    """|{k : 1 <= k <= n, d_k .. d_{k+r-1} = pattern}|."""
    return int(np.count_nonzero(_matches(prefix, pattern, n)))


def running_pattern_counts(prefix: DigitPrefix, pattern: Pattern, n: int) -> np.ndarray:
    """Entry k - 1 holds pattern_count(prefix, pattern, k) for k = 1..n."""
    return np.cumsum(_matches(prefix, pattern, n), dtype=np.int64)


@dataclass(frozen=True)
class FrequencyReport:
    n: int
    counts: Dict[str, int]
    frequencies: Dict[str, Fraction]

    def frequency(self, pattern: str) -> Fraction:
        return self.frequencies[pattern]


def pattern_frequencies(prefix: DigitPrefix, r: int, n: int) -> FrequencyReport:
    """Counts and exact frequencies of all 2^r patterns of length r."""
    if r < 1:
        raise ValueError(f"pattern length must be >= 1, got {r}")
    windows = _windows(prefix, r, n)
    weights = 1 << np.arange(r - 1, -1, -1, dtype=np.int64)
    codes = windows.astype(np.int64) @ weights
    tally = np.bincount(codes, minlength=1 << r)
    counts = {"".join(bits): int(tally[index]) for index, bits in enumerate(product("01", repeat=r))}
    return FrequencyReport(n, counts, {key: Fraction(value, n) for key, value in counts.items()})


def digit_frequencies(prefix: DigitPrefix, n: int) -> FrequencyReport:
    """Exact frequencies of 0 and 1 among d_1..d_n."""
    return pattern_frequencies(prefix, 1, n)


@dataclass(frozen=True)
class Theorem4Diagnostics:
    j: int
    ratio_lm: Fraction  # (l_1 + .. + l_j) / (m_1 + .. + m_j)
    ratio_l: Fraction   # l_j / (l_1 + .. + l_{j-1})
    ratio_m: Fraction   # m_j / (m_1 + .. + m_{j-1})


def theorem4_diagnostics(decomp: BlockDecomposition, j: int) -> Theorem4Diagnostics:
    """Block-ratio diagnostics whose limits characterize simple normality."""
    if j < 2:
        raise ValueError(f"j must be >= 2, got {j}")
    if j > decomp.closed_blocks:
        raise OutOfRange(f"need {j} closed blocks, decomposition has {decomp.closed_blocks}")
    lengths = cumulative([length for length, _ones in decomp.runs[:j]])
    ones = cumulative([m for _length, m in decomp.runs[:j]])
    return Theorem4Diagnostics(
        j=j,
        ratio_lm=Fraction(lengths[j], ones[j]),
        ratio_l=Fraction(decomp.l(j), lengths[j - 1]),
        ratio_m=Fraction(decomp.m(j), ones[j - 1]),
    )


@dataclass(frozen=True)
class ZeroCountBounds:
    """Zeros among d_1..d_n read off the blocks, with the frequency range over the block."""

    n: int
    region: Region
    count: int
    frequency: Fraction
    lower: Fraction
    upper: Fraction


def zero_count_bounds(decomp: BlockDecomposition, n: int, lengths: Optional[Sequence[int]] = None,
                      ones: Optional[Sequence[int]] = None) -> ZeroCountBounds:
    """Count zeros up to n from block lengths.

    On J_j the count is L_{j-1} + q and the frequency increases with q; on
    K_j the count is L_j and the frequency decreases with q. ``lower`` and
    ``upper`` bound the frequency over the whole block (the open end is the
    infimum or supremum, not attained).

    ``lengths`` and ``ones`` are the cumulative L and M sums over all blocks;
    callers sweeping many n pass them once.
    """
    region = decomp.locate(n)
    if region.tag == RegionTag.K0:
        return ZeroCountBounds(n, region, 0, Fraction(0), Fraction(0), Fraction(0))
    j, m0 = region.j, decomp.m0
    if lengths is None:
        lengths = cumulative([length for length, _ones in decomp.runs[:j]])
    if ones is None:
        ones = cumulative([m for _length, m in decomp.runs[:j]])
    if region.tag == RegionTag.J:
        count = lengths[j - 1] + region.q
        start = m0 + lengths[j - 1] + ones[j - 1]
        # J_1 at the very start of the expansion holds only zeros.
        lower = Fraction(lengths[j - 1], start) if start else Fraction(1)
        upper = Fraction(lengths[j], m0 + lengths[j] + ones[j - 1])
    else:
        count = lengths[j]
        lower = Fraction(lengths[j], m0 + lengths[j] + ones[j])
        upper = Fraction(lengths[j], m0 + lengths[j] + ones[j - 1])
    return ZeroCountBounds(n, region, count, Fraction(count, n), lower, upper)


@dataclass
class FrequencyTrend:
    points: List[Tuple[int, Fraction]] = field(default_factory=list)  # (n, |freq(0, n) - 1/2|)
    decreasing: bool = True


def frequency_trend(prefix: DigitPrefix, checkpoints: Iterable[int]) -> FrequencyTrend:
    """|freq(0, n) - 1/2| at each checkpoint and whether it strictly decreases."""
    trend = FrequencyTrend()
    ones = np.cumsum(prefix.array, dtype=np.int64)
    for n in sorted(set(checkpoints)):
        if n > prefix.n:
            raise InsufficientDigits(f"trend checkpoint {n} beyond prefix of {prefix.n} digits")
        zeros = n - int(ones[n - 1])
        trend.points.append((n, abs(Fraction(zeros, n) - Fraction(1, 2))))
    deviations = [deviation for _n, deviation in trend.points]
    trend.decreasing = all(later < earlier for earlier, later in zip(deviations, deviations[1:]))
    logger.debug(f"Frequency trend over {len(deviations)} checkpoints, decreasing={trend.decreasing}")
    return trend
