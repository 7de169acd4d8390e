"""Exact complex numbers with rational real and imaginary parts.

Coefficient arithmetic for series work that must be checked exactly,
where floating point would hide whether an identity holds to machine
precision or actually holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"cannot build an exact coefficient from {type(value).__name__}")


@dataclass(frozen=True)
class RationalComplex:
    """A complex number a + bi with a, b rational."""

    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, re=0, im=0) -> "RationalComplex":
        return cls(_as_fraction(re), _as_fraction(im))

    @classmethod
    def coerce(cls, value) -> "RationalComplex":
        if isinstance(value, RationalComplex):
            return value
        if isinstance(value, complex):
            raise TypeError("refusing to coerce a float complex into exact arithmetic")
        return cls(_as_fraction(value), Fraction(0))

    def __add__(self, other):
        other = RationalComplex.coerce(other)
        return RationalComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = RationalComplex.coerce(other)
        return RationalComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return RationalComplex.coerce(other) - self

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __mul__(self, other):
        other = RationalComplex.coerce(other)
        return RationalComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalComplex.coerce(other)
        denom = other.re * other.re + other.im * other.im
        if denom == 0:
            raise ZeroDivisionError("division by exact zero")
        return RationalComplex(
            (self.re * other.re + self.im * other.im) / denom,
            (self.im * other.re - self.re * other.im) / denom,
        )

    def __rtruediv__(self, other):
        return RationalComplex.coerce(other) / self

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * float(self.im)

    def __abs__(self) -> float:
        return abs(self.to_complex())

    def __repr__(self) -> str:
        return f"({self.re}{'+' if self.im >= 0 else ''}{self.im}i)"


RC_ZERO = RationalComplex(Fraction(0), Fraction(0))
RC_ONE = RationalComplex(Fraction(1), Fraction(0))
RC_I = RationalComplex(Fraction(0), Fraction(1))
