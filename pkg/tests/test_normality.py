"""Tests for prefix digit statistics and block-ratio diagnostics."""

import sys
import os
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dyadic_orbits.core.blocks import complement_decomposition, decompose, from_lengths, render_digits  # noqa: E402
from dyadic_orbits.core.digits import DigitPrefix, open_stream  # noqa: E402
from dyadic_orbits.core.normality import (  # noqa: E402
    digit_frequencies,
    frequency_trend,
    pattern_count,
    pattern_frequencies,
    running_pattern_counts,
    theorem4_diagnostics,
    zero_count_bounds,
)
from dyadic_orbits.errors import InsufficientDigits, OutOfRange  # noqa: E402
from dyadic_orbits.storage.models import RegionTag  # noqa: E402


def alternating_prefix(n: int) -> DigitPrefix:
    return open_stream("blocks:cycle=[(1,1)]").materialize(n)


def test_pattern_count():
    prefix = alternating_prefix(10)
    assert pattern_count(prefix, "01", 4) == 2
    assert pattern_count(prefix, "0", 5) == 3
    assert pattern_count(prefix, (1, 0), 4) == 2
    assert pattern_count(prefix, "11", 9) == 0
    assert pattern_count(DigitPrefix(b"0000"), "00", 3) == 3
    print("  PASS: overlapping sliding-window counts")

    with pytest.raises(InsufficientDigits):
        pattern_count(prefix, "010", 9)
    with pytest.raises(ValueError):
        pattern_count(prefix, "02", 3)
    print("  PASS: short prefix and bad pattern rejected")


def test_frequencies():
    report = digit_frequencies(alternating_prefix(5), 5)
    assert report.frequency("0") == Fraction(3, 5)
    assert report.counts == {"0": 3, "1": 2}
    report = pattern_frequencies(open_stream("champernowne").materialize(200), 3, 150)
    assert len(report.counts) == 8
    assert sum(report.counts.values()) == 150
    assert sum(report.frequencies.values()) == 1
    print("  PASS: exact frequencies")


def test_diagnostics():
    alternating = from_lengths(0, [(1, 1)] * 8)
    diag = theorem4_diagnostics(alternating, 5)
    assert diag.ratio_l == Fraction(1, 4)
    assert diag.ratio_m == Fraction(1, 4)
    assert diag.ratio_lm == 1
    print("  PASS: cycle (1,1)")

    family = from_lengths(0, [(j, j) for j in range(1, 101)])
    assert theorem4_diagnostics(family, 4).ratio_l == Fraction(2, 3)
    assert theorem4_diagnostics(family, 100).ratio_l == Fraction(100, 4950)
    print("  PASS: l_j = m_j = j")

    factorials = from_lengths(0, [(factorial(j), 1) for j in range(1, 9)])
    diag = theorem4_diagnostics(factorials, 6)
    assert diag.ratio_l == Fraction(720, 153)
    assert diag.ratio_m == Fraction(1, 5)
    print("  PASS: factorial lengths")

    with pytest.raises(ValueError):
        theorem4_diagnostics(alternating, 1)
    with pytest.raises(OutOfRange):
        theorem4_diagnostics(alternating, 9)
    print("  PASS: j range")


def test_zero_count_bounds():
    decomp = decompose(open_stream("champernowne").materialize(21))
    bounds = zero_count_bounds(decomp, 7)
    assert bounds.region.tag == RegionTag.J
    assert bounds.count == 2
    assert (bounds.lower, bounds.upper) == (Fraction(1, 6), Fraction(3, 8))
    assert zero_count_bounds(decomp, 1).count == 0
    print("  PASS: Champernowne n=7")


@settings(max_examples=60, deadline=None)
@given(m0=st.integers(0, 4),
       pairs=st.lists(st.tuples(st.integers(1, 9), st.integers(1, 9)), min_size=1, max_size=10))
def test_zero_count_matches_digits(m0, pairs):
    decomp = from_lengths(m0, pairs)
    digits = render_digits(decomp).array
    for n in range(1, decomp.complete_range + 1):
        bounds = zero_count_bounds(decomp, n)
        assert bounds.count == n - int(digits[:n].sum())
        assert bounds.lower <= bounds.frequency <= bounds.upper


def test_running_pattern_counts():
    prefix = open_stream("champernowne").materialize(400)
    running = running_pattern_counts(prefix, "00", 398)
    assert len(running) == 398
    for n in (1, 2, 17, 150, 398):
        assert running[n - 1] == pattern_count(prefix, "00", n)
    print("  PASS: running counts agree with single counts")


@settings(max_examples=60, deadline=None)
@given(m0=st.integers(0, 4),
       pairs=st.lists(st.tuples(st.integers(1, 9), st.integers(1, 9)), min_size=1, max_size=10))
def test_double_zero_count_matches_runs(m0, pairs):
    decomp = from_lengths(m0, pairs)
    prefix = render_digits(decomp)
    assert pattern_count(prefix, "00", prefix.n - 1) == sum(length - 1 for length, _ones in pairs)


def test_complement_symmetry():
    decomp = from_lengths(0, [(2, 5)] * 10)
    flipped = complement_decomposition(decomp)
    assert flipped.m0 == 2
    for j in range(2, 10):
        original, swapped = theorem4_diagnostics(decomp, j), theorem4_diagnostics(flipped, j)
        assert swapped.ratio_lm == 1 / original.ratio_lm
        assert swapped.ratio_l == original.ratio_m
        assert swapped.ratio_m == original.ratio_l
    print("  PASS: complemented cycle exchanges the l and m diagnostics")


@settings(max_examples=60, deadline=None)
@given(pairs=st.lists(st.tuples(st.integers(1, 9), st.integers(1, 9)), min_size=3, max_size=10))
def test_complement_exchanges_block_ratios(pairs):
    decomp = from_lengths(0, pairs)
    flipped = complement_decomposition(decomp)
    assert flipped.m0 == pairs[0][0]
    for j in range(2, min(decomp.closed_blocks, flipped.closed_blocks) + 1):
        assert theorem4_diagnostics(flipped, j).ratio_l == theorem4_diagnostics(decomp, j).ratio_m


def test_frequency_trend():
    prefix = alternating_prefix(1000)
    trend = frequency_trend(prefix, range(1, 1001))
    assert all(deviation <= Fraction(1, 2 * n) for n, deviation in trend.points)
    assert not trend.decreasing
    assert frequency_trend(prefix, [1, 3, 5, 99, 999]).decreasing
    print("  PASS: |freq - 1/2| <= 1/(2n) for cycle (1,1)")

    with pytest.raises(InsufficientDigits):
        frequency_trend(prefix, [1001])
    print("  PASS: checkpoints past the prefix rejected")


def main():
    """Run all tests."""
    print("=" * 60)
    print("Normality Diagnostics Test Harness")
    print("=" * 60)

    print("\n--- Test: Counts ---")
    test_pattern_count()
    test_running_pattern_counts()
    test_double_zero_count_matches_runs()
    test_frequencies()

    print("\n--- Test: Block Diagnostics ---")
    test_diagnostics()
    test_zero_count_bounds()
    test_zero_count_matches_digits()
    test_complement_symmetry()
    test_complement_exchanges_block_ratios()

    print("\n--- Test: Trend ---")
    test_frequency_trend()

    print("\nAll tests passed!")


if __name__ == "__main__":
    main()
