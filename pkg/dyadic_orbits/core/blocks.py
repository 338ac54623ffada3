"""Block decomposition C0 B1 C1 B2 C2 ... of a digit prefix.

B_j are maximal zero runs (length l_j) and C_j maximal one runs (length m_j,
m_0 = |C_0| may be 0). Positions are 1-based: t_0 = m_0,
s_j = t_{j-1} + l_j and t_j = s_j + m_j, so that J_j = {t_{j-1}+1 .. s_j}
and K_j = {s_j+1 .. t_j}.
"""

import logging
from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import accumulate
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DigitsExhausted, OutOfRange
from ..storage.models import RegionTag
from .digits import DigitPrefix, DigitStream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Region:
    tag: str
    j: int
    q: int

    def __str__(self) -> str:
        if self.tag == RegionTag.K0:
            return f"K0[q={self.q}]"
        return f"{self.tag}{self.j}[q={self.q}]"


@dataclass(frozen=True)
class BlockDecomposition:
    """m_0, the closed (l_j, m_j) pairs and their cumulative positions.

    ``t`` holds t_0..t_J and ``s`` holds s_0..s_J, where s_0 is a placeholder
    equal to t_0 so both tuples are indexed by j.
    """

    m0: int
    runs: Tuple[Tuple[int, int], ...]
    t: Tuple[int, ...] = field(repr=False)
    s: Tuple[int, ...] = field(repr=False)
    complete: bool = True
    open_run: Optional[int] = None  # length of a trailing zero run not yet closed by a 1
    prefix_length: int = 0
    declared: bool = field(default=False, compare=False)  # lengths given, not read from digits

    @property
    def block_count(self) -> int:
        return len(self.runs)

    @property
    def complete_range(self) -> int:
        """Largest n that can be located."""
        return self.t[-1]

    def l(self, j: int) -> int:
        return self.runs[j - 1][0]

    def m(self, j: int) -> int:
        return self.m0 if j == 0 else self.runs[j - 1][1]

    def ones_closed(self, j: int) -> bool:
        """Whether C_j is followed by a zero inside the prefix (or declared)."""
        if j < self.block_count or (self.declared and j == self.block_count):
            return True
        return j == self.block_count and self.open_run is not None

    @property
    def closed_blocks(self) -> int:
        """Number of j >= 1 whose B_j and C_j are both closed."""
        return self.block_count if self.ones_closed(self.block_count) else self.block_count - 1

    def locate(self, n: int) -> Region:
        """Return the region K0, J_j or K_j containing index n.

        Raises:
            OutOfRange: n lies beyond t_J; materialize more digits.
        """
        if n < 1:
            raise ValueError(f"index must be >= 1, got {n}")
        if n > self.complete_range:
            raise OutOfRange(f"index {n} beyond decomposed range {self.complete_range}")
        if n <= self.t[0]:
            return Region(RegionTag.K0, 0, n)
        j = bisect_left(self.t, n)
        if n <= self.s[j]:
            return Region(RegionTag.J, j, n - self.t[j - 1])
        return Region(RegionTag.K, j, n - self.s[j])

    def region_size(self, region: Region) -> int:
        if region.tag == RegionTag.K0:
            return self.m0
        if region.tag == RegionTag.J:
            return self.l(region.j)
        return self.m(region.j)

    def boundaries(self, limit: Optional[int] = None) -> List[int]:
        """All positive t_j and s_j up to limit (default: the complete range)."""
        limit = self.complete_range if limit is None else limit
        points = {value for value in self.t + self.s[1:] if 0 < value <= limit}
        return sorted(points)

    def run_sequence(self) -> List[Tuple[int, int]]:
        """The prefix as (digit, length) runs, trailing open run included."""
        sequence = [(1, self.m0)] if self.m0 else []
        for length, ones in self.runs:
            sequence.append((0, length))
            sequence.append((1, ones))
        if self.open_run:
            sequence.append((0, self.open_run))
        return sequence


def _from_run_sequence(sequence: Sequence[Tuple[int, int]]) -> BlockDecomposition:
    """Assemble a decomposition from alternating (digit, length) runs."""
    index = 0
    m0 = 0
    if sequence and sequence[0][0] == 1:
        m0 = sequence[0][1]
        index = 1
    pairs = []
    open_run = None
    while index < len(sequence):
        length = sequence[index][1]
        if index + 1 < len(sequence):
            pairs.append((length, sequence[index + 1][1]))
            index += 2
        else:
            open_run = length
            index += 1
    position = m0 + sum(length + ones for length, ones in pairs) + (open_run or 0)
    return _build(m0, pairs, open_run, position)


def _build(m0: int, pairs: Sequence[Tuple[int, int]], open_run: Optional[int],
           prefix_length: int, declared: bool = False) -> BlockDecomposition:
    t = [m0]
    s = [m0]
    for length, ones in pairs:
        s.append(t[-1] + length)
        t.append(s[-1] + ones)
    return BlockDecomposition(
        m0=m0,
        runs=tuple(pairs),
        t=tuple(t),
        s=tuple(s),
        complete=open_run is None,
        open_run=open_run,
        prefix_length=prefix_length,
        declared=declared,
    )


def decompose(prefix: DigitPrefix) -> BlockDecomposition:
    """Block decomposition of a non-empty digit prefix.

    A trailing zero run is not a block until a 1 closes it; it is reported
    as ``open_run`` with ``complete=False``.
    """
    if prefix.n < 1:
        raise ValueError("cannot decompose an empty prefix")
    digits = prefix.array
    starts = np.concatenate(([0], np.flatnonzero(np.diff(digits)) + 1))
    lengths = np.diff(np.concatenate((starts, [digits.size])))
    sequence = [(int(digit), int(length)) for digit, length in zip(digits[starts], lengths)]
    decomp = _from_run_sequence(sequence)
    logger.debug(f"Decomposed {prefix.n} digits into {decomp.block_count} blocks (m0={decomp.m0})")
    return decomp


def from_lengths(m0: int, pairs: Sequence[Tuple[int, int]]) -> BlockDecomposition:
    if m0 < 0 or any(length < 1 or ones < 1 for length, ones in pairs):
        raise ValueError("block lengths must be >= 1 and m0 >= 0")
    pairs = [tuple(pair) for pair in pairs]
    return _build(m0, pairs, None, m0 + sum(length + ones for length, ones in pairs), declared=True)


def render_digits(decomp: BlockDecomposition) -> DigitPrefix:
    """The digit prefix a decomposition was read from."""
    return DigitPrefix(b"".join((b"1" if digit else b"0") * length for digit, length in decomp.run_sequence()))


def complement_decomposition(decomp: BlockDecomposition) -> BlockDecomposition:
    """Decomposition of the complemented prefix, from the lengths alone.

    Zero blocks and one blocks exchange roles: m_0 becomes the first zero
    block (or l_1 becomes the new m_0), and a trailing ones-run turns into
    an open zero run.
    """
    flipped = [(1 - digit, length) for digit, length in decomp.run_sequence()]
    return _from_run_sequence(flipped)


def cumulative(values: Sequence[int]) -> List[int]:
    """Prefix sums with a leading 0: out[j] = values[0] + ... + values[j-1]."""
    return [0] + list(accumulate(values))


def decompose_stream(stream: DigitStream, n: int) -> BlockDecomposition:
    """Decompose enough of a stream that the block holding n is fully closed.

    Grows the materialized prefix geometrically until B_j and C_j of the
    block containing n end inside it.
    """
    length = max(2 * n, 64)
    while True:
        try:
            prefix = stream.materialize(length)
            exhausted = False
        except DigitsExhausted:
            if stream.available() < 1:
                raise
            prefix = stream.materialize(stream.available())
            exhausted = True
        decomp = decompose(prefix)
        closed = decomp.closed_blocks
        if closed >= 0 and n <= decomp.t[closed]:
            return decomp
        if exhausted:
            raise OutOfRange(f"{stream.label} ends before the block holding {n} closes")
        logger.debug(f"Extending {stream.label} past {length} digits to close the block holding {n}")
        length *= 2
