"""Rigorous interval carrier with dyadic endpoints.

Endpoints are raw mpmath mpf tuples (sign, mantissa, exponent, bitcount).
All arithmetic goes through ``mpmath.libmp``'s interval kernels, which round
the lower endpoint toward -inf and the upper endpoint toward +inf. The mpf
exponent is an unbounded Python int, so values like 2^(p * 720!) stay
representable without ever expanding them.
"""

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from typing import Tuple, Union

from mpmath.libmp import (
    fone,
    from_int,
    from_man_exp,
    from_rational,
    mpf_cmp,
    mpf_ln2,
    mpf_mul,
    mpf_sub,
    mpi_add,
    mpi_div,
    mpi_log,
    mpi_mul,
    mpi_pow,
    mpi_pow_int,
    mpi_sub,
    round_ceiling,
    round_floor,
    to_float,
    to_rational,
)

from ..config import config

Number = Union[int, Fraction]


def working_precision(epsilon: Fraction) -> int:
    """Bits of working precision for a relative width target epsilon."""
    bits = math.ceil(math.log2(epsilon.denominator / epsilon.numerator)) if epsilon < 1 else 0
    return max(config.MIN_WORKING_PRECISION, bits + config.PRECISION_MARGIN)


def _mpf_from_fraction(value: Fraction, prec: int, rnd) -> tuple:
    return from_rational(value.numerator, value.denominator, prec, rnd)


def _to_fraction(value: tuple) -> Fraction:
    # gmpy2 backends hand back mpz, which Decimal and json refuse
    num, den = to_rational(value)
    return Fraction(int(num), int(den))


@dataclass(frozen=True)
class DyadicInterval:
    """Closed interval [lo, hi] guaranteed to contain a real value."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        if mpf_cmp(self.lo, self.hi) > 0:
            raise ValueError("interval lower endpoint exceeds upper endpoint")

    # -- construction ------------------------------------------------------
    @classmethod
    def point(cls, value: int) -> "DyadicInterval":
        exact = from_int(value)
        return cls(exact, exact)

    @classmethod
    def from_man_exp(cls, lo_man: int, hi_man: int, exp: int) -> "DyadicInterval":
        """[lo_man * 2^exp, hi_man * 2^exp], exact."""
        return cls(from_man_exp(lo_man, exp), from_man_exp(hi_man, exp))

    @classmethod
    def from_fraction(cls, value: Number, prec: int) -> "DyadicInterval":
        value = Fraction(value)
        return cls(
            _mpf_from_fraction(value, prec, round_floor),
            _mpf_from_fraction(value, prec, round_ceiling),
        )

    @classmethod
    def two_power(cls, exponent: Number, prec: int) -> "DyadicInterval":
        """Enclosure of 2^exponent; exact when exponent is an integer."""
        exponent = Fraction(exponent)
        if exponent.denominator == 1:
            exact = from_man_exp(1, int(exponent))
            return cls(exact, exact)
        base = (from_int(2), from_int(2))
        power = cls.from_fraction(exponent, prec + 20)
        return cls(*mpi_pow(base, power.pair, prec))

    @property
    def pair(self) -> Tuple[tuple, tuple]:
        return (self.lo, self.hi)

    # -- arithmetic ----------------------------------------------------------
    def add(self, other: "DyadicInterval", prec: int = 0) -> "DyadicInterval":
        return DyadicInterval(*mpi_add(self.pair, other.pair, prec))

    def sub(self, other: "DyadicInterval", prec: int = 0) -> "DyadicInterval":
        return DyadicInterval(*mpi_sub(self.pair, other.pair, prec))

    def mul(self, other: "DyadicInterval", prec: int = 0) -> "DyadicInterval":
        return DyadicInterval(*mpi_mul(self.pair, other.pair, prec))

    def div(self, other: "DyadicInterval", prec: int) -> "DyadicInterval":
        return DyadicInterval(*mpi_div(self.pair, other.pair, prec))

    def div_int(self, n: int, prec: int) -> "DyadicInterval":
        return self.div(DyadicInterval.point(n), prec)

    def pow(self, exponent: Fraction, prec: int) -> "DyadicInterval":
        """self^exponent for a positive interval and a rational exponent.

        Integer exponents use directed-rounding integer powers; other
        exponents go through exp(exponent * log(self)) with outward rounding.
        """
        exponent = Fraction(exponent)
        if exponent.denominator == 1:
            return DyadicInterval(*mpi_pow_int(self.pair, int(exponent), prec))
        power = DyadicInterval.from_fraction(exponent, prec + 20)
        return DyadicInterval(*mpi_pow(self.pair, power.pair, prec))

    # -- comparisons ---------------------------------------------------------
    @staticmethod
    def _cmp_fraction(endpoint: tuple, value: Fraction) -> int:
        # endpoint * den <=> num, both sides exact
        scaled = mpf_mul(endpoint, from_int(value.denominator))
        return mpf_cmp(scaled, from_int(value.numerator))

    def lo_at_least(self, value: Number) -> bool:
        return self._cmp_fraction(self.lo, Fraction(value)) >= 0

    def hi_at_most(self, value: Number) -> bool:
        return self._cmp_fraction(self.hi, Fraction(value)) <= 0

    def contains(self, value: Number) -> bool:
        value = Fraction(value)
        return self._cmp_fraction(self.lo, value) <= 0 <= self._cmp_fraction(self.hi, value)

    def certainly_below(self, other: "DyadicInterval") -> bool:
        """Every point of self is strictly below every point of other."""
        return mpf_cmp(self.hi, other.lo) < 0

    def certainly_at_most(self, other: "DyadicInterval") -> bool:
        return mpf_cmp(self.hi, other.lo) <= 0

    def intersects(self, other: "DyadicInterval") -> bool:
        return mpf_cmp(self.hi, other.lo) >= 0 and mpf_cmp(other.hi, self.lo) >= 0

    def is_subset(self, other: "DyadicInterval") -> bool:
        return mpf_cmp(other.lo, self.lo) <= 0 and mpf_cmp(self.hi, other.hi) <= 0

    def relative_width_at_most(self, epsilon: Fraction) -> bool:
        """(hi - lo) / lo <= epsilon, decided exactly. Needs lo > 0."""
        width = mpf_sub(self.hi, self.lo)
        lhs = mpf_mul(width, from_int(epsilon.denominator))
        rhs = mpf_mul(self.lo, from_int(epsilon.numerator))
        return mpf_cmp(lhs, rhs) <= 0

    def relative_width(self) -> float:
        width = mpf_sub(self.hi, self.lo, 53, round_ceiling)
        return to_float(width) / to_float(self.lo) if to_float(self.lo) else math.inf

    # -- conversions ---------------------------------------------------------
    def lo_fraction(self) -> Fraction:
        return _to_fraction(self.lo)

    def hi_fraction(self) -> Fraction:
        return _to_fraction(self.hi)

    def magnitude_bits(self) -> int:
        """Upper bound on log2(hi), from the mpf exponent alone."""
        _sign, _man, exp, bc = self.hi
        return exp + bc

    def log2(self, prec: int = 64) -> "DyadicInterval":
        """Enclosure of log2 of a positive interval."""
        ln2 = (mpf_ln2(prec + 10, round_floor), mpf_ln2(prec + 10, round_ceiling))
        natural = mpi_log(self.pair, prec + 10)
        return DyadicInterval(*mpi_div(natural, ln2, prec))

    def to_decimal_bounds(self, digits: int = 18) -> Tuple[Decimal, Decimal]:
        """Outward-rounded decimal endpoints with the given significant digits."""
        lo, hi = self.lo_fraction(), self.hi_fraction()
        with localcontext() as ctx:
            ctx.prec = digits
            ctx.rounding = ROUND_FLOOR
            lo_dec = Decimal(lo.numerator) / Decimal(lo.denominator)
            ctx.rounding = ROUND_CEILING
            hi_dec = Decimal(hi.numerator) / Decimal(hi.denominator)
        return lo_dec, hi_dec

    def midpoint_float(self) -> float:
        return (to_float(self.lo) + to_float(self.hi)) / 2

    def __str__(self) -> str:
        return f"[{to_float(self.lo):.17g}, {to_float(self.hi):.17g}]"


ONE = DyadicInterval(fone, fone)


def interval_sum(intervals, prec: int = 0) -> DyadicInterval:
    """Outward-rounded sum; addition of enclosures is associative up to rounding."""
    total = DyadicInterval.point(0)
    for item in intervals:
        total = total.add(item, prec)
    return total
