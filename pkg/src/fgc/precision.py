"""High-precision reals with an explicit error radius, and q-power scaling.

Values are mpmath ``mpf`` numbers computed with guard digits; every
operation widens the carried radius by the rounding it may have introduced.
Huge factors q^E (E an exact rational, often of size n^2) are never
evaluated inside arithmetic: :class:`ScaledReal` keeps them symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

GUARD_DIGITS = 15


def workdps(precision_digits: int):
    return mp.workdps(precision_digits + GUARD_DIGITS)


def ulp_radius(x, precision_digits: int):
    """Bound on one rounding error for |x| at the working precision."""
    return abs(mpf(x)) * mpf(10) ** (-(precision_digits + GUARD_DIGITS - 2))


@dataclass(frozen=True)
class Approx:
    """value +- radius."""

    value: mpf
    radius: mpf

    @classmethod
    def exact(cls, x) -> "Approx":
        return cls(mpf(x), mpf(0))

    def __mul__(self, other: "Approx") -> "Approx":
        v = self.value * other.value
        r = (abs(self.value) * other.radius + abs(other.value) * self.radius
             + self.radius * other.radius + ulp_radius(v, mp.dps - GUARD_DIGITS))
        return Approx(v, r)

    def __add__(self, other: "Approx") -> "Approx":
        v = self.value + other.value
        return Approx(v, self.radius + other.radius + ulp_radius(v, mp.dps - GUARD_DIGITS))

    def relative_radius(self):
        if self.value == 0:
            return mpf("inf") if self.radius else mpf(0)
        return self.radius / abs(self.value)

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class ScaledReal:
    """mantissa * base**exponent with an exact rational exponent."""

    mantissa: Approx
    exponent: Fraction
    base: int

    def to_mpf(self):
        e = mpf(self.exponent.numerator) / self.exponent.denominator
        return self.mantissa.value * mpmath.power(self.base, e)

    def ratio_to(self, exact: int):
        """exact / self as an mpf (uses mpmath's unbounded exponent range)."""
        if self.mantissa.value == 0:
            return mpf("inf") if exact else mpf(1)
        if isinstance(exact, Fraction):
            return mpf(exact.numerator) / exact.denominator / self.to_mpf()
        return mpf(exact) / self.to_mpf()

    def as_json(self) -> dict:
        return {
            "mantissa": mpmath.nstr(self.mantissa.value, mp.dps - GUARD_DIGITS, strip_zeros=False),
            "mantissa_error": mpmath.nstr(self.mantissa.radius, 5),
            "exponent": f"{self.exponent.numerator}/{self.exponent.denominator}",
            "base": self.base,
        }
