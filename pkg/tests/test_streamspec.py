"""Tests for the stream DSL parser, renderer and validator.

Covers:
1. Parsing each stream kind into a normalized StreamSpec
2. Syntax errors carrying a position and the expected tokens
3. Validation issues for specs that are not points of Σ
4. parse(render(spec)) == spec on generated specs
"""

import sys
import os

import pytest
from hypothesis import given, settings, strategies as st

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dyadic_orbits.core.streamspec import (  # noqa: E402
    evaluate_expr,
    odd_part,
    parse_expr,
    parse_spec,
    render_expr,
    render_spec,
    validate_spec,
)
from dyadic_orbits.errors import OverflowBudget, SpecSyntaxError, UnknownKind  # noqa: E402
from dyadic_orbits.storage.models import IssueCode, StreamKind, StreamSpec  # noqa: E402


def test_parse_kinds():
    spec = parse_spec("rational:1/3")
    assert spec.kind == StreamKind.RATIONAL
    assert (spec.numerator, spec.denominator) == (1, 3)
    print("  PASS: rational:1/3")

    spec = parse_spec("blocks:cycle=[(2,3)]")
    assert spec.kind == StreamKind.BLOCK_CYCLE
    assert spec.pairs == ((2, 3),)
    assert spec.m0 == 0
    print("  PASS: blocks:cycle=[(2,3)]")

    spec = parse_spec("blocks:l=j!;m=1")
    assert spec.kind == StreamKind.BLOCK_FAMILY
    assert spec.l_expr == "j!"
    assert spec.m_expr == "1"
    print("  PASS: blocks:l=j!;m=1")

    assert parse_spec("champernowne") == StreamSpec(kind=StreamKind.CHAMPERNOWNE)
    spec = parse_spec("random:seed=42;lmax=8")
    assert (spec.seed, spec.lmax) == (42, 8)
    assert parse_spec("random:seed=7").lmax == 16
    spec = parse_spec("blocks:cycle=[(1,2),(3,4)];m0=5")
    assert spec.pairs == ((1, 2), (3, 4)) and spec.m0 == 5
    assert parse_spec("digits:file=/tmp/some digits.txt").path == "/tmp/some digits.txt"
    print("  PASS: champernowne, random, multi-pair cycle and file specs")


def test_rational_is_reduced():
    spec = parse_spec("rational:2/6")
    assert (spec.numerator, spec.denominator) == (1, 3)
    assert parse_spec(" rational : 4 / 12 ") == spec
    print("  PASS: 2/6 normalizes to 1/3")


def test_syntax_errors():
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec("rational:1/")
    assert info.value.position == 11
    assert info.value.expected == ["<int>"]
    print(f"  PASS: {info.value}")

    with pytest.raises(SpecSyntaxError) as info:
        parse_spec("rational:1.5/3")
    assert info.value.position == 10
    print("  PASS: floating-point literal rejected")

    with pytest.raises(SpecSyntaxError):
        parse_spec("blocks:cycle=[(1,1)")
    with pytest.raises(SpecSyntaxError):
        parse_spec("champernowne extra")
    with pytest.raises(SpecSyntaxError):
        parse_spec("")
    with pytest.raises(SpecSyntaxError):
        parse_spec("rational:1/3\nrational:1/5")
    print("  PASS: unclosed bracket, trailing input, empty and multi-line text")

    with pytest.raises(UnknownKind):
        parse_spec("continued:1,2,3")
    print("  PASS: unknown kind")

    payload = SpecSyntaxError("bad", 3, ["'('"]).to_dict()
    assert payload == {"error": "SyntaxError", "message": "bad at position 3 (expected '(')",
                       "position": 3, "expected": ["'('"]}
    print("  PASS: structured error payload")


def test_expressions():
    tree = parse_expr("2^j+min(j,3)*j!")
    assert evaluate_expr(tree, 1) == 2 + 1 * 1
    assert evaluate_expr(tree, 4) == 16 + 3 * 24
    assert render_expr(tree) == "2^j+min(j,3)*j!"
    assert evaluate_expr(parse_expr("2^3^2"), 1) == 512
    assert render_expr(parse_expr("(j+1)*(j+2)")) == "(j+1)*(j+2)"
    assert render_expr(parse_expr("((j))")) == "j"
    assert evaluate_expr(parse_expr("max(j, 5) + 0"), 9) == 9
    print("  PASS: precedence, right-associative powers, minimal parentheses")

    with pytest.raises(OverflowBudget):
        evaluate_expr(parse_expr("j!"), 20000)
    with pytest.raises(OverflowBudget):
        evaluate_expr(parse_expr("2^j"), 10**8)
    print("  PASS: expression caps")


def test_validate_spec():
    report = validate_spec(StreamSpec(kind=StreamKind.RATIONAL, numerator=3, denominator=8))
    assert not report.ok
    assert [issue.code for issue in report.issues] == [IssueCode.BINARY_RATIONAL_DENOMINATOR]
    print("  PASS: 3/8 is a binary rational")

    assert validate_spec(parse_spec("rational:1/3")).ok
    assert validate_spec(parse_spec("rational:6/9")).ok
    assert not validate_spec(parse_spec("rational:3/12")).ok
    print("  PASS: 1/3 and 6/9 are accepted, 3/12 = 1/4 is not")

    report = validate_spec(StreamSpec(kind=StreamKind.BLOCK_CYCLE, pairs=((2, 0),)))
    assert not report.ok
    assert report.issues[0].code == IssueCode.ZERO_BLOCK_LENGTH
    print("  PASS: (2,0) has an empty ones block")

    assert not validate_spec(StreamSpec(kind=StreamKind.RATIONAL, numerator=5, denominator=3)).ok
    assert not validate_spec(StreamSpec(kind=StreamKind.BLOCK_CYCLE, pairs=())).ok
    assert not validate_spec(parse_spec("random:seed=1;lmax=0")).ok
    assert not validate_spec(parse_spec(f"random:seed={2**64}")).ok
    assert not validate_spec(parse_spec("digits:file=/nonexistent/digits.txt")).ok
    print("  PASS: out-of-range numerator, empty cycle, bad lmax, bad seed, missing file")


def test_family_validation():
    assert validate_spec(parse_spec("blocks:l=j!;m=1")).ok
    report = validate_spec(parse_spec("blocks:l=j;m=min(j,3)+max(0,0)*j"))
    assert report.ok
    report = validate_spec(StreamSpec(kind=StreamKind.BLOCK_FAMILY, l_expr="j", m_expr="min(j,3)*0"))
    assert not report.ok
    assert report.issues[0].code == IssueCode.ZERO_BLOCK_LENGTH
    print("  PASS: family expressions evaluated for j >= 1")


def test_odd_part():
    assert odd_part(8) == 1
    assert odd_part(12) == 3
    assert odd_part(7) == 7
    print("  PASS: odd_part")


pairs = st.lists(st.tuples(st.integers(1, 50), st.integers(1, 50)), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(pairs=pairs, m0=st.integers(0, 9))
def test_cycle_render_roundtrip(pairs, m0):
    spec = StreamSpec(kind=StreamKind.BLOCK_CYCLE, pairs=tuple(pairs), m0=m0)
    assert parse_spec(render_spec(spec)) == spec


@settings(max_examples=60, deadline=None)
@given(num=st.integers(1, 10**6), den=st.integers(2, 10**6))
def test_rational_render_roundtrip(num, den):
    spec = parse_spec(f"rational:{num}/{den}")
    assert parse_spec(render_spec(spec)) == spec


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), lmax=st.integers(1, 64))
def test_random_render_roundtrip(seed, lmax):
    spec = StreamSpec(kind=StreamKind.RANDOM_BLOCKS, seed=seed, lmax=lmax)
    assert parse_spec(render_spec(spec)) == spec


def test_family_render_roundtrip():
    for text in ("blocks:l=j;m=j", "blocks:l=j!;m=1", "blocks:l=2^(j+1);m=(j*3)!;m0=4",
                 "blocks:l=min(j,4);m=max(2,j)"):
        spec = parse_spec(text)
        assert parse_spec(render_spec(spec)) == spec
    print("  PASS: family specs survive rendering")


def main():
    """Run all tests."""
    print("=" * 60)
    print("Stream DSL Test Harness")
    print("=" * 60)

    print("\n--- Test: Parsing ---")
    test_parse_kinds()
    test_rational_is_reduced()

    print("\n--- Test: Syntax Errors ---")
    test_syntax_errors()

    print("\n--- Test: Expressions ---")
    test_expressions()

    print("\n--- Test: Validation ---")
    test_validate_spec()
    test_family_validation()
    test_odd_part()

    print("\n--- Test: Render Roundtrip ---")
    test_cycle_render_roundtrip()
    test_rational_render_roundtrip()
    test_random_render_roundtrip()
    test_family_render_roundtrip()

    print("\nAll tests passed!")


if __name__ == "__main__":
    main()
