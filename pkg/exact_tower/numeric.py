"""Certified complex ball arithmetic with rational centres and radii.

A ball ``(re + i*im, rad)`` stands for every complex number within Euclidean
distance ``rad`` of its centre. Operations round centres to a dyadic grid of
the working precision and fold the rounding error into the radius, so the
result always encloses the exact value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional


class InsufficientPrecision(ArithmeticError):
    """Raised when a square root cannot be separated from its negative at this precision."""


def _round_to(value: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(round(value * scale), scale)


def _round_up(value: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    scaled = value * scale
    ceiling = -((-scaled.numerator) // scaled.denominator)
    return Fraction(ceiling, scale)


def sqrt_lower(value: Fraction, bits: int) -> Fraction:
    """Rational lower bound of sqrt(value) within 2**-bits, for value >= 0."""

    if value < 0:
        raise ValueError("sqrt_lower needs a non-negative value")
    scale = 1 << bits
    return Fraction(isqrt(value.numerator * scale * scale // value.denominator), scale)


@dataclass(frozen=True)
class ComplexBall:
    re: Fraction
    im: Fraction
    rad: Fraction = Fraction(0)

    @classmethod
    def exact(cls, value: Fraction) -> "ComplexBall":
        return cls(Fraction(value), Fraction(0), Fraction(0))

    def magnitude_bound(self) -> Fraction:
        return abs(self.re) + abs(self.im)

    def __neg__(self) -> "ComplexBall":
        return ComplexBall(-self.re, -self.im, self.rad)

    def add(self, other: "ComplexBall", bits: int) -> "ComplexBall":
        return ComplexBall(self.re + other.re, self.im + other.im, self.rad + other.rad).rounded(bits)

    def mul(self, other: "ComplexBall", bits: int) -> "ComplexBall":
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        rad = (
            self.magnitude_bound() * other.rad
            + other.magnitude_bound() * self.rad
            + self.rad * other.rad
        )
        return ComplexBall(re, im, rad).rounded(bits)

    def scale(self, factor: Fraction, bits: int) -> "ComplexBall":
        return ComplexBall(self.re * factor, self.im * factor, self.rad * abs(factor)).rounded(bits)

    def rounded(self, bits: int) -> "ComplexBall":
        re = _round_to(self.re, bits)
        im = _round_to(self.im, bits)
        error = abs(re - self.re) + abs(im - self.im)
        return ComplexBall(re, im, _round_up(self.rad + error, bits))

    def contains_zero(self) -> bool:
        return self.re * self.re + self.im * self.im <= self.rad * self.rad

    def contains(self, value: complex, slack: float = 0.0) -> bool:
        dx = Fraction(value.real) - self.re
        dy = Fraction(value.imag) - self.im
        reach = self.rad + Fraction(slack)
        return dx * dx + dy * dy <= reach * reach

    def overlaps(self, other: "ComplexBall") -> bool:
        dx = self.re - other.re
        dy = self.im - other.im
        reach = self.rad + other.rad
        return dx * dx + dy * dy <= reach * reach

    def sqrt(self, bits: int, reference: Optional["ComplexBall"] = None) -> "ComplexBall":
        """Ball around one square root of every point of this ball.

        Without ``reference`` the root nearest the principal root of the centre
        is returned. With ``reference`` (a ball holding a single root) the root
        inside the reference is returned, tracking a branch fixed earlier.
        """

        candidate = _principal_sqrt(self.re, self.im, bits + 8)
        dx = self.re - (candidate.re * candidate.re - candidate.im * candidate.im)
        dy = self.im - 2 * candidate.re * candidate.im
        epsilon = self.rad + abs(dx) + abs(dy)
        modulus_sq = candidate.re * candidate.re + candidate.im * candidate.im
        if modulus_sq == 0 or 64 * epsilon * epsilon >= modulus_sq * modulus_sq:
            raise InsufficientPrecision("square root not isolated at this precision")
        modulus_low = sqrt_lower(modulus_sq, bits + 8)
        if modulus_low <= 0:
            raise InsufficientPrecision("square root modulus not bounded away from zero")
        root = ComplexBall(candidate.re, candidate.im, epsilon / modulus_low).rounded(bits)
        if reference is not None and not root.overlaps(reference):
            root = -root
        return root

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def mid_str(self, digits: int = 12) -> str:
        value = self.to_complex()
        if value.imag == 0:
            return f"{value.real:.{digits}g}"
        return f"{value.real:.{digits}g}{value.imag:+.{digits}g}j"


def _principal_sqrt(re: Fraction, im: Fraction, bits: int) -> ComplexBall:
    modulus = sqrt_lower(re * re + im * im, bits)
    real_part = sqrt_lower(max((modulus + re) / 2, Fraction(0)), bits)
    imag_part = sqrt_lower(max((modulus - re) / 2, Fraction(0)), bits)
    if im < 0:
        imag_part = -imag_part
    return ComplexBall(real_part, imag_part)
