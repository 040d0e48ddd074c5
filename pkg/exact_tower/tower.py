"""Exact arithmetic in towers of quadratic extensions of Q.

An element is a sparse map from a bitmask of adjoined roots to a rational
coefficient; bit ``t`` set means the monomial contains ``r_t``. Monomials are
square-free: whenever two monomials share ``r_t`` the product replaces
``r_t**2`` by its radicand, which lives in the sub-tower below ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple, Union

from exact_tower.numeric import ComplexBall, InsufficientPrecision

Terms = Dict[int, Fraction]
Scalar = Union[int, Fraction]

START_BITS = 64


class TowerError(ArithmeticError):
    """Base class for exact tower errors."""


class ZeroRadicandError(TowerError):
    """Raised when adjoining the square root of zero."""


class TowerDivisionError(TowerError, ZeroDivisionError):
    """Raised on division by zero (or by a zero divisor of a degenerate tower)."""


class ForeignElementError(TowerError):
    """Raised when combining elements of two different towers."""


class TowerElement:
    """Immutable element of a :class:`Tower` in canonical square-free form."""

    __slots__ = ("tower", "terms")

    def __init__(self, tower: "Tower", terms: Mapping[int, Fraction]) -> None:
        self.tower = tower
        self.terms: Terms = {mask: Fraction(c) for mask, c in terms.items() if c != 0}

    # -- conversions ------------------------------------------------------

    def _coerce(self, other: Union["TowerElement", Scalar]) -> "TowerElement":
        if isinstance(other, TowerElement):
            if other.tower is not self.tower:
                raise ForeignElementError("Elements belong to different towers")
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower.rational(other)
        return NotImplemented

    def key(self) -> Tuple[Tuple[int, Fraction], ...]:
        """Hashable canonical form."""

        return tuple(sorted(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(mask == 0 for mask in self.terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise TowerError("Element is not rational")
        return self.terms.get(0, Fraction(0))

    def roots_used(self) -> int:
        """Bitmask of the roots occurring in any monomial."""

        mask = 0
        for monomial in self.terms:
            mask |= monomial
        return mask

    def conjugate(self, root: int) -> "TowerElement":
        """Negate root ``root`` in every monomial (formal conjugate)."""

        bit = 1 << root
        return TowerElement(
            self.tower, {m: (-c if m & bit else c) for m, c in self.terms.items()}
        )

    def numeric(self, precision: Fraction = Fraction(1, 10**12)) -> ComplexBall:
        return self.tower.numeric_eval(self, precision)

    def to_json(self) -> Dict[str, str]:
        return {format(mask, "x"): _fraction_text(c) for mask, c in sorted(self.terms.items())}

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for mask, c in other.terms.items():
            terms[mask] = terms.get(mask, Fraction(0)) + c
        return TowerElement(self.tower, terms)

    __radd__ = __add__

    def __neg__(self) -> "TowerElement":
        return TowerElement(self.tower, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TowerElement(self.tower, self.tower.multiply_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "TowerElement":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.tower.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "TowerElement":
        return TowerElement(self.tower, self.tower.inverse_terms(self.terms))

    # -- comparison -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.terms == ({0: Fraction(other)} if other != 0 else {})
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self.tower is other.tower and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mask, c in sorted(self.terms.items()):
            roots = "*".join(f"r{t}" for t in range(mask.bit_length()) if mask >> t & 1)
            parts.append(f"{c}" if not roots else (roots if c == 1 else f"{c}*{roots}"))
        return " + ".join(parts)


@dataclass
class _Root:
    radicand: TowerElement
    reference: ComplexBall


class Tower:
    """Append-only tower Q(r_0, r_1, ...) with r_t**2 = radicand_t.

    Roots are adjoined during a single-threaded build phase; afterwards the
    tower is only read. Multiplication caches grow on reads but never change
    results.
    """

    def __init__(self) -> None:
        self._roots: List[_Root] = []
        self._by_radicand: Dict[Tuple[Tuple[int, Fraction], ...], int] = {}
        self._monomial_cache: Dict[Tuple[int, int], Terms] = {}
        self._ball_cache: Dict[Tuple[int, int], ComplexBall] = {}

    def __len__(self) -> int:
        return len(self._roots)

    # -- construction -----------------------------------------------------

    def zero(self) -> TowerElement:
        return TowerElement(self, {})

    def one(self) -> TowerElement:
        return TowerElement(self, {0: Fraction(1)})

    def rational(self, value: Scalar) -> TowerElement:
        return TowerElement(self, {0: Fraction(value)})

    def root(self, handle: int) -> TowerElement:
        if not 0 <= handle < len(self._roots):
            raise TowerError(f"Unknown root handle {handle}")
        return TowerElement(self, {1 << handle: Fraction(1)})

    def radicand(self, handle: int) -> TowerElement:
        return self._roots[handle].radicand

    def radicands(self) -> List[TowerElement]:
        return [root.radicand for root in self._roots]

    def adjoin_sqrt(self, radicand: TowerElement) -> int:
        """Adjoin a new root of ``radicand`` and return its handle.

        The numeric branch is fixed here: the root closest to the principal
        square root of the radicand's value.
        """

        if radicand.tower is not self:
            raise ForeignElementError("Radicand belongs to a different tower")
        if radicand.is_zero():
            raise ZeroRadicandError("Cannot adjoin the square root of zero")
        bits = START_BITS
        while True:
            value = self._evaluate(radicand.terms, bits)
            try:
                reference = value.sqrt(bits)
                break
            except InsufficientPrecision:
                bits *= 2
        handle = len(self._roots)
        self._roots.append(_Root(radicand, reference))
        self._by_radicand.setdefault(radicand.key(), handle)
        return handle

    def cached_sqrt(self, radicand: TowerElement) -> int:
        """Handle of an existing root with this exact radicand, adjoining one if needed."""

        handle = self._by_radicand.get(radicand.key())
        if handle is not None:
            return handle
        return self.adjoin_sqrt(radicand)

    def rational_radicands(self) -> List[Tuple[int, Fraction]]:
        return [
            (handle, root.radicand.rational_value())
            for handle, root in enumerate(self._roots)
            if root.radicand.is_rational()
        ]

    # -- exact arithmetic -------------------------------------------------

    def multiply_terms(self, left: Terms, right: Terms) -> Terms:
        result: Terms = {}
        for mask_a, coeff_a in left.items():
            for mask_b, coeff_b in right.items():
                factor = coeff_a * coeff_b
                for mask, coeff in self._monomial_product(mask_a, mask_b).items():
                    result[mask] = result.get(mask, Fraction(0)) + factor * coeff
        return {mask: c for mask, c in result.items() if c != 0}

    def _monomial_product(self, a: int, b: int) -> Terms:
        common = a & b
        if not common:
            return {a | b: Fraction(1)}
        key = (a, b) if a <= b else (b, a)
        cached = self._monomial_cache.get(key)
        if cached is not None:
            return cached
        bit = 1 << (common.bit_length() - 1)
        # r_t * r_t = radicand_t, whose roots all lie below t
        rest = self._monomial_product(a ^ bit, b ^ bit)
        product = self.multiply_terms(rest, self._roots[bit.bit_length() - 1].radicand.terms)
        self._monomial_cache[key] = product
        return product

    def inverse_terms(self, terms: Terms) -> Terms:
        if not terms:
            raise TowerDivisionError("Division by zero")
        mask = 0
        for monomial in terms:
            mask |= monomial
        if mask == 0:
            return {0: 1 / terms[0]}
        bit = 1 << (mask.bit_length() - 1)
        radicand = self._roots[bit.bit_length() - 1].radicand.terms
        lower = {m: c for m, c in terms.items() if not m & bit}
        upper = {m ^ bit: c for m, c in terms.items() if m & bit}
        conjugate = dict(lower)
        for m, c in upper.items():
            conjugate[m | bit] = -c
        lower_sq = self.multiply_terms(lower, lower)
        upper_sq = self.multiply_terms(self.multiply_terms(upper, upper), radicand)
        norm = dict(lower_sq)
        for m, c in upper_sq.items():
            norm[m] = norm.get(m, Fraction(0)) - c
        norm = {m: c for m, c in norm.items() if c != 0}
        if not norm:
            raise TowerDivisionError(
                f"Element has zero norm over root {bit.bit_length() - 1}; the tower is degenerate"
            )
        return self.multiply_terms(conjugate, self.inverse_terms(norm))

    # -- numeric evaluation -----------------------------------------------

    def root_ball(self, handle: int, bits: int) -> ComplexBall:
        cached = self._ball_cache.get((handle, bits))
        if cached is not None:
            return cached
        root = self._roots[handle]
        working = bits
        while True:
            value = self._evaluate(root.radicand.terms, working)
            try:
                ball = value.sqrt(working, reference=root.reference)
                break
            except InsufficientPrecision:
                working *= 2
        self._ball_cache[(handle, bits)] = ball
        return ball

    def _evaluate(self, terms: Terms, bits: int) -> ComplexBall:
        total = ComplexBall.exact(Fraction(0))
        for mask, coeff in sorted(terms.items()):
            monomial = ComplexBall.exact(Fraction(1))
            for handle in range(mask.bit_length()):
                if mask >> handle & 1:
                    monomial = monomial.mul(self.root_ball(handle, bits), bits)
            total = total.add(monomial.scale(coeff, bits), bits)
        return total

    def numeric_eval(self, element: TowerElement, precision: Fraction) -> ComplexBall:
        """Ball of radius <= ``precision`` around the value of ``element``."""

        if element.tower is not self:
            raise ForeignElementError("Element belongs to a different tower")
        precision = Fraction(precision)
        if precision <= 0:
            raise ValueError("precision must be positive")
        bits = START_BITS
        while True:
            ball = self._evaluate(element.terms, bits)
            if ball.rad <= precision:
                return ball
            bits *= 2


def _fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def ensure_tower_element(tower: Tower, value: Union[TowerElement, Scalar]) -> TowerElement:
    if isinstance(value, TowerElement):
        if value.tower is not tower:
            raise ForeignElementError("Element belongs to a different tower")
        return value
    return tower.rational(value)
