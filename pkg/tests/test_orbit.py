"""Tests for rigorous orbit sums.

Covers:
1. Tail and term enclosures
2. Prefix and dual sums against the exact rational oracle
3. Checkpoint schedules and the bit budget
"""

import sys
import math
import os
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dyadic_orbits.core.blocks import decompose_stream  # noqa: E402
from dyadic_orbits.core.digits import open_stream  # noqa: E402
from dyadic_orbits.core.dyadic import DyadicInterval  # noqa: E402
from dyadic_orbits.core.orbit import (  # noqa: E402
    Exponent,
    build_schedule,
    dual_prefix_sums,
    exact_oracle,
    lemma_term_bounds,
    log_grid,
    orbit_points,
    prefix_sums,
    range_sum,
    tail_interval,
    term_interval,
    upper_constant,
    upper_constant_exact,
)
from dyadic_orbits.errors import OverflowBudget  # noqa: E402

EPSILON = Fraction(1, 2**40)


def test_exponent():
    assert Exponent.parse("2") == Exponent(2)
    assert Exponent.parse("3/2").value == Fraction(3, 2)
    assert Exponent.parse("6/4") == Exponent(3, 2)
    assert str(Exponent(3, 2)) == "3/2"
    assert Exponent.parse(2).is_integer
    with pytest.raises(ValueError):
        Exponent.parse("1.5")
    with pytest.raises(ValueError):
        Exponent.parse("-1")
    print("  PASS: exponent parsing")


def test_tail_interval():
    fifth = open_stream("rational:1/5")
    tail = tail_interval(fifth, 1, 4)
    assert (tail.lo_fraction(), tail.hi_fraction()) == (Fraction(3, 16), Fraction(4, 16))
    assert tail.contains(Fraction(1, 5))
    third = open_stream("rational:1/3")
    tail = tail_interval(third, 2, 2)
    assert (tail.lo_fraction(), tail.hi_fraction()) == (Fraction(2, 4), Fraction(3, 4))
    assert tail.contains(Fraction(2, 3))
    wide, narrow = tail_interval(third, 1, 6), tail_interval(third, 1, 7)
    assert narrow.is_subset(wide)
    assert narrow.relative_width() < wide.relative_width()
    print("  PASS: tail enclosures nest")


def test_term_interval():
    stream = open_stream("blocks:cycle=[(3,1)]")
    term = term_interval(stream, 1, 2, EPSILON)
    assert term.lo_at_least(64) and term.hi_at_most(256)
    print(f"  PASS: zero block l=3, q=1, p=2 -> {term}")

    term = term_interval(open_stream("rational:1/3"), 1, 2, EPSILON)
    assert term.contains(9)
    assert term.relative_width_at_most(EPSILON)
    print("  PASS: 1/(1/3)^2 = 9 enclosed")

    term = term_interval(open_stream("rational:2/3"), 1, 1, EPSILON)
    assert term.lo_at_least(1) and term.hi_at_most(2)
    print("  PASS: ones digit term in [1, 2]")

    term = term_interval(open_stream("rational:1/3"), 1, "3/2", EPSILON)
    assert term.lo_fraction() ** 2 <= 27 <= term.hi_fraction() ** 2
    print("  PASS: fractional exponent 3/2")


def test_bit_budget():
    stream = open_stream("blocks:l=5000;m=1")
    with pytest.raises(OverflowBudget):
        term_interval(stream, 1, 2, EPSILON, bit_budget=1000)
    term = term_interval(stream, 1, 2, EPSILON, bit_budget=20000)
    assert term.magnitude_bits() > 10000
    print("  PASS: bit budget")


def test_prefix_sums_examples():
    series = prefix_sums(open_stream("rational:1/3"), 2, 2, EPSILON, [1, 2])
    assert series.at(2).S.contains(Fraction(45, 4))
    assert series.at(2).A.contains(Fraction(45, 8))
    print("  PASS: S_2(2) = 45/4 for 1/3")

    series = prefix_sums(open_stream("rational:1/5"), 1, 4, EPSILON, [4])
    assert series.last.S.contains(Fraction(125, 12))
    print("  PASS: S_1(4) = 125/12 for 1/5")

    series = prefix_sums(open_stream("champernowne"), 2, 300, EPSILON)
    for point in series.checkpoints:
        assert point.S.lo_at_least(point.n)
    values = [point.S for point in series.checkpoints]
    assert all(not later.certainly_below(earlier) for earlier, later in zip(values, values[1:]))
    assert series.ns == log_grid(300)
    print("  PASS: S >= n and monotone on Champernowne")


def test_exact_oracle():
    assert exact_oracle(1, 3, 2, 2) == Fraction(45, 4)
    assert exact_oracle(1, 5, 1, 4) == Fraction(125, 12)
    assert exact_oracle(2, 3, 1, 2) == Fraction(9, 2)
    assert exact_oracle(1, 3, 1, 2, dual=True) == 1
    assert exact_oracle(1, 5, 2, 4, dual=True) == Fraction(30, 25)
    assert orbit_points(1, 5, 4) == [Fraction(1, 5), Fraction(2, 5), Fraction(4, 5), Fraction(3, 5)]
    with pytest.raises(ValueError):
        exact_oracle(1, 3, Fraction(3, 2), 2)
    print("  PASS: exact oracle")


def test_oracle_conformance():
    for num, den in ((1, 3), (2, 3), (1, 5), (3, 5), (1, 7), (5, 11)):
        stream = open_stream(f"rational:{num}/{den}")
        for p in (1, 2, 3):
            checkpoints = [1, 7, 50, 400]
            series = prefix_sums(stream, p, 400, EPSILON, checkpoints)
            for point in series.checkpoints:
                exact = exact_oracle(num, den, p, point.n)
                assert point.S.contains(exact), (num, den, p, point.n)
                assert point.S.relative_width_at_most(EPSILON)
    print("  PASS: enclosures contain the oracle with width <= epsilon")


@settings(max_examples=25, deadline=None)
@given(den=st.integers(3, 400).filter(lambda d: d & (d - 1) != 0), data=st.data())
def test_oracle_property(den, data):
    num = data.draw(st.integers(1, den - 1))
    common = den // math.gcd(num, den)
    if common & (common - 1) == 0:
        return
    p = data.draw(st.integers(1, 3))
    n = data.draw(st.integers(1, 60))
    series = prefix_sums(open_stream(f"rational:{num}/{den}"), p, n, EPSILON, [n])
    assert series.last.S.contains(exact_oracle(num, den, p, n))


def test_dual_sums():
    series = dual_prefix_sums(open_stream("rational:1/3"), 1, 2, EPSILON, [2])
    assert series.last.S.contains(1)
    series = dual_prefix_sums(open_stream("rational:1/5"), 2, 4, EPSILON, [4])
    assert series.last.S.contains(Fraction(30, 25))
    series = dual_prefix_sums(open_stream("champernowne"), 2, 1000, EPSILON)
    assert all(point.S.hi_at_most(point.n) for point in series.checkpoints)
    assert series.dual
    print("  PASS: dual sums")


def test_range_sum_merges():
    stream = open_stream("rational:5/11")
    whole = range_sum(stream, 2, 1, 100, EPSILON)
    left = range_sum(stream, 2, 1, 37, EPSILON)
    right = range_sum(stream, 2, 38, 100, EPSILON)
    merged = left.add(right)
    assert merged.intersects(whole)
    assert merged.contains(exact_oracle(5, 11, 2, 100))
    print("  PASS: disjoint range sums merge by addition")


def test_schedules():
    assert log_grid(35) == [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 35]
    decomp = decompose_stream(open_stream("blocks:cycle=[(2,3)]"), 20)
    assert build_schedule("blocks", 20, decomp) == [2, 5, 7, 10, 12, 15, 17, 20]
    assert build_schedule("log", 20) == [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20]
    assert 17 in build_schedule("all", 20, decomp)
    with pytest.raises(ValueError):
        build_schedule("blocks", 20)
    print("  PASS: schedules")


def test_lemma_constants():
    lower, upper = lemma_term_bounds(3, 1, 2)
    assert lower.lo_fraction() == 64 and upper.hi_fraction() == 256
    assert upper_constant_exact(1) == 4
    assert upper_constant_exact(2) == Fraction(16, 3)
    assert upper_constant_exact("3/2") is None
    assert upper_constant(2).contains(Fraction(16, 3))
    assert isinstance(upper_constant("3/2"), DyadicInterval)
    print("  PASS: lemma constants")


def main():
    """Run all tests."""
    print("=" * 60)
    print("Orbit Sum Test Harness")
    print("=" * 60)

    print("\n--- Test: Terms ---")
    test_exponent()
    test_tail_interval()
    test_term_interval()
    test_bit_budget()

    print("\n--- Test: Sums ---")
    test_prefix_sums_examples()
    test_exact_oracle()
    test_oracle_conformance()
    test_oracle_property()
    test_dual_sums()
    test_range_sum_merges()

    print("\n--- Test: Schedules and Constants ---")
    test_schedules()
    test_lemma_constants()

    print("\nAll tests passed!")


if __name__ == "__main__":
    main()
