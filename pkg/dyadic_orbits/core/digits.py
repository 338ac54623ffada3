"""Lazily materialized binary digit streams of points of Σ.

A stream is a view (offset, flipped) over a shared digit store. The store
pulls runs of equal digits from a source generator and appends them to an
ASCII buffer of b"0"/b"1", checking each run against the guard unless the
spec declares its run lengths (block cycles, families, random blocks).
"""

import itertools
import logging
import random
import re
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

import numpy as np

from ..config import config
from ..errors import DigitsExhausted, DigitSourceError, GuardExceeded, InvalidSpec
from ..storage.models import StreamKind, StreamSpec
from .streamspec import compile_expr, parse_spec, render_spec, validate_spec

logger = logging.getLogger(__name__)

# Largest slice of a single run appended in one step.
RUN_SLICE = 1 << 16
# Lookahead granularity when scanning for the end of a zero run.
SCAN_CHUNK = 4096

_FLIP = bytes.maketrans(b"01", b"10")
_DIGIT_BYTE = (b"0", b"1")

# (digit, length, declared)
Run = Tuple[int, int, bool]


def rational_digit_engine(num: int, den: int, i: int) -> int:
    """The i-th binary digit of num/den by modular long division."""
    remainder = (num * pow(2, i - 1, den)) % den
    return (2 * remainder) // den


# -- run sources -------------------------------------------------------------
def _group_runs(digits: Iterator[int], declared: bool = False) -> Iterator[Run]:
    for digit, group in itertools.groupby(digits):
        yield digit, sum(1 for _ in group), declared


def _rational_digits(num: int, den: int) -> Iterator[int]:
    remainder = num
    while True:
        remainder *= 2
        if remainder >= den:
            remainder -= den
            yield 1
        else:
            yield 0


def _champernowne_digits() -> Iterator[int]:
    for k in itertools.count(1):
        for char in format(k, "b"):
            yield 1 if char == "1" else 0


def _block_runs(m0: int, pairs: Iterator[Tuple[int, int]]) -> Iterator[Run]:
    if m0:
        yield 1, m0, True
    for length, ones in pairs:
        yield 0, length, True
        yield 1, ones, True


def _family_pairs(l_expr: str, m_expr: str) -> Iterator[Tuple[int, int]]:
    length_of = compile_expr(l_expr)
    ones_of = compile_expr(m_expr)
    for j in itertools.count(1):
        yield length_of(j), ones_of(j)


def random_block_length(rng: random.Random, lmax: int) -> int:
    """Geometric(1/2) on {1, 2, ...} truncated at lmax.

    Start at 1 and keep incrementing while a fresh bit from the generator
    is 0 and the length is still below lmax.
    """
    length = 1
    while length < lmax and rng.getrandbits(1) == 0:
        length += 1
    return length


def _random_pairs(seed: int, lmax: int) -> Iterator[Tuple[int, int]]:
    rng = random.Random(seed)
    while True:
        length = random_block_length(rng, lmax)
        yield length, random_block_length(rng, lmax)


def read_digit_file(path: str) -> bytes:
    """Read an ASCII 0/1 digit file, ignoring whitespace."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise DigitSourceError(f"cannot read digit file {path!r}: {exc}") from exc
    digits = re.sub(rb"\s+", b"", raw)
    stray = digits.translate(None, b"01")
    if stray:
        raise DigitSourceError(f"digit file {path!r} contains non-binary character {stray[:1]!r}")
    return digits


def _file_runs(path: str) -> Iterator[Run]:
    digits = read_digit_file(path)
    logger.debug(f"Loaded {len(digits)} digits from {path}")
    yield from _group_runs(d - 48 for d in digits)


def _runs_for(spec: StreamSpec) -> Iterator[Run]:
    if spec.kind == StreamKind.RATIONAL:
        return _group_runs(_rational_digits(spec.numerator, spec.denominator))
    if spec.kind == StreamKind.CHAMPERNOWNE:
        return _group_runs(_champernowne_digits())
    if spec.kind == StreamKind.BLOCK_CYCLE:
        return _block_runs(spec.m0, itertools.cycle(spec.pairs))
    if spec.kind == StreamKind.BLOCK_FAMILY:
        return _block_runs(spec.m0, _family_pairs(spec.l_expr, spec.m_expr))
    if spec.kind == StreamKind.RANDOM_BLOCKS:
        return _block_runs(0, _random_pairs(spec.seed, spec.lmax))
    return _file_runs(spec.path)


# -- storage -------------------------------------------------------------------
@dataclass(frozen=True)
class DigitPrefix:
    """The digits d_1..d_n as ASCII bytes."""

    bits: bytes

    @property
    def n(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def digit(self, i: int) -> int:
        return self.bits[i - 1] - 48

    @property
    def array(self) -> np.ndarray:
        """Digits as a uint8 array of 0/1 (index 0 holds d_1)."""
        return np.frombuffer(self.bits, dtype=np.uint8) - 48

    def packed(self) -> bytes:
        return np.packbits(self.array).tobytes()

    @property
    def text(self) -> str:
        return self.bits.decode("ascii")

    def complement(self) -> "DigitPrefix":
        return DigitPrefix(self.bits.translate(_FLIP))

    def __str__(self) -> str:
        return ",".join(self.text)


class _DigitStore:
    """Growable buffer shared by every view of one stream."""

    def __init__(self, spec: StreamSpec, guard: int):
        self.spec = spec
        self.guard = guard
        self.buffer = bytearray()
        self._runs = _runs_for(spec)
        self._pending: Optional[Run] = None
        self._run_digit = -1
        self._run_length = 0
        self._lock = threading.Lock()
        self.exhausted = False
        self.failure: Optional[GuardExceeded] = None

    def ensure(self, n: int):
        """Materialize at least n digits (fewer only if a finite source ends).

        Once the guard trips the buffer stops at the last digit before it and
        every later request past that point raises the same error.
        """
        if len(self.buffer) >= n or self.exhausted:
            return
        if self.failure is not None:
            raise self.failure
        with self._lock:
            if len(self.buffer) >= n or self.exhausted:
                return
            if self.failure is not None:
                raise self.failure
            before = len(self.buffer)
            while len(self.buffer) < n:
                if self._pending is None:
                    try:
                        self._pending = next(self._runs)
                    except StopIteration:
                        self.exhausted = True
                        break
                digit, remaining, declared = self._pending
                take = min(remaining, n - len(self.buffer), RUN_SLICE)
                self.buffer.extend(_DIGIT_BYTE[digit] * take)
                self._pending = (digit, remaining - take, declared) if remaining > take else None
                self._track_run(digit, take, declared)
            logger.debug(f"Materialized {render_spec(self.spec)} from {before} to {len(self.buffer)} digits")

    def _track_run(self, digit: int, count: int, declared: bool):
        if digit == self._run_digit:
            self._run_length += count
        else:
            self._run_digit, self._run_length = digit, count
        if not declared and self._run_length > self.guard:
            end = len(self.buffer)
            position = end - self._run_length + self.guard + 1
            logger.warning(f"Guard tripped on {render_spec(self.spec)} at position {position}")
            del self.buffer[position - 1:]
            self._pending = None
            self.failure = GuardExceeded(digit, self._run_length, self.guard, position)
            raise self.failure


class DigitStream:
    """Digits d_1, d_2, ... of a point of Σ described by a StreamSpec."""

    def __init__(self, spec: StreamSpec, guard: Optional[int] = None,
                 _store: Optional[_DigitStore] = None, offset: int = 0, flipped: bool = False):
        if _store is None:
            report = validate_spec(spec)
            if not report.ok:
                raise InvalidSpec([f"{issue.code}: {issue.message}" for issue in report.issues])
            _store = _DigitStore(spec, guard if guard is not None else config.DEFAULT_GUARD)
            logger.info(f"Opened stream {render_spec(spec)} (guard {_store.guard})")
        self.spec = spec
        self._store = _store
        self.offset = offset
        self.flipped = flipped

    @classmethod
    def from_text(cls, text: str, guard: Optional[int] = None) -> "DigitStream":
        return cls(parse_spec(text), guard=guard)

    @property
    def guard(self) -> int:
        return self._store.guard

    @property
    def label(self) -> str:
        text = render_spec(self.spec)
        if self.flipped:
            text = f"1-({text})"
        if self.offset:
            text = f"f^{self.offset}({text})"
        return text

    def _ensure(self, n: int):
        """Make view digits 1..n available or raise DigitsExhausted."""
        needed = n + self.offset
        self._store.ensure(needed)
        if len(self._store.buffer) < needed:
            raise DigitsExhausted(
                f"{self.label} has only {len(self._store.buffer) - self.offset} digits; {n} requested"
            )

    def _slice(self, start: int, stop: int) -> bytes:
        """View digits start..stop-1 (1-based) as ASCII bytes."""
        chunk = bytes(self._store.buffer[start - 1 + self.offset:stop - 1 + self.offset])
        return chunk.translate(_FLIP) if self.flipped else chunk

    def digit_at(self, i: int) -> int:
        if i < 1:
            raise ValueError(f"digit index must be >= 1, got {i}")
        self._ensure(i)
        value = self._store.buffer[i - 1 + self.offset] - 48
        return 1 - value if self.flipped else value

    def materialize(self, n: int) -> DigitPrefix:
        if n < 1:
            raise ValueError(f"prefix length must be >= 1, got {n}")
        self._ensure(n)
        return DigitPrefix(self._slice(1, n + 1))

    def available(self) -> int:
        """Digits materialized so far for this view."""
        return max(0, len(self._store.buffer) - self.offset)

    def complement(self) -> "DigitStream":
        """Digits of 1 - x."""
        return DigitStream(self.spec, _store=self._store, offset=self.offset, flipped=not self.flipped)

    def shifted(self, k: int) -> "DigitStream":
        """Digits of f^k(x): d_i(f^k(x)) = d_{i+k}(x)."""
        if k < 0:
            raise ValueError(f"shift must be >= 0, got {k}")
        return DigitStream(self.spec, _store=self._store, offset=self.offset + k, flipped=self.flipped)

    def zero_run_at(self, k: int) -> int:
        """Number of consecutive zeros starting at d_k (0 when d_k = 1)."""
        self._ensure(k)
        one = b"0" if self.flipped else b"1"
        start = k - 1 + self.offset
        limit = k + SCAN_CHUNK
        while True:
            self._store.ensure(limit + self.offset)
            found = self._store.buffer.find(one, start, limit + self.offset)
            if found >= 0:
                return found - start
            if self._store.exhausted:
                raise DigitsExhausted(f"{self.label} ends inside the zero run starting at {k}")
            limit += max(SCAN_CHUNK, limit - k)

    def tail_integer(self, k: int, m: int) -> int:
        """The integer whose binary numeral is d_k..d_{k+m-1}."""
        self._ensure(k + m - 1)
        return int(self._slice(k, k + m), 2)


def open_stream(text: str, guard: Optional[int] = None) -> DigitStream:
    """Parse, validate and open a stream from DSL text."""
    return DigitStream.from_text(text, guard=guard)


def declared_pairs(spec: StreamSpec, count: int) -> Optional[Tuple[int, List[Tuple[int, int]]]]:
    """(m0, first count (l, m) pairs) for block specs, without materializing digits.

    Returns None for kinds whose blocks are only known from their digits.
    """
    if spec.kind == StreamKind.BLOCK_CYCLE:
        pairs = itertools.cycle(spec.pairs)
    elif spec.kind == StreamKind.BLOCK_FAMILY:
        pairs = _family_pairs(spec.l_expr, spec.m_expr)
    elif spec.kind == StreamKind.RANDOM_BLOCKS:
        pairs = _random_pairs(spec.seed, spec.lmax)
    else:
        return None
    return spec.m0, list(itertools.islice(pairs, count))
