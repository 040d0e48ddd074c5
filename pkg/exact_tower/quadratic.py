"""Square classes of rationals and degrees of multiquadratic extensions of Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import factorint, isprime, primerange

from exact_tower.tower import Tower, TowerError

TRIAL_DIVISION_BOUND = 10_000
BRUTE_FORCE_LIMIT = 12
FACTORINT_MAX_BITS = 128


class FactorizationTooHardError(TowerError):
    """Raised when a composite cofactor is too large to hand to the general factorizer."""


class DegreeMismatchError(TowerError):
    """Raised when the rank method and the subset-product check disagree."""


_PRIMES: Dict[int, List[int]] = {}


def _primes_up_to(bound: int) -> List[int]:
    primes = _PRIMES.get(bound)
    if primes is None:
        primes = list(primerange(2, bound + 1))
        _PRIMES[bound] = primes
    return primes


def _odd_primes_of(value: int, bound: int, max_bits: int = FACTORINT_MAX_BITS) -> List[int]:
    """Primes dividing ``value`` to an odd power, for ``value`` >= 1."""

    odd: List[int] = []
    remaining = value
    for prime in _primes_up_to(bound):
        if prime * prime > remaining:
            break
        exponent = 0
        while remaining % prime == 0:
            remaining //= prime
            exponent += 1
        if exponent % 2:
            odd.append(prime)
    if remaining == 1:
        return odd
    if remaining < bound * bound or isprime(remaining):
        odd.append(remaining)
        return sorted(odd)
    root = isqrt(remaining)
    if root * root == remaining:
        return odd
    if remaining.bit_length() > max_bits:
        raise FactorizationTooHardError(
            f"Cofactor {remaining} exceeds {bound}**2, is composite and has more than {max_bits} bits"
        )
    # every prime factor of the cofactor is above the trial-division bound
    odd.extend(prime for prime, exponent in factorint(remaining).items() if exponent % 2)
    return sorted(odd)


def squarefree_part(value: Fraction, bound: int = TRIAL_DIVISION_BOUND) -> Tuple[int, int]:
    """Return ``(sign, m)`` with ``value = sign * m * square`` and ``m`` square-free."""

    value = Fraction(value)
    if value == 0:
        raise ValueError("squarefree_part needs a nonzero value")
    sign = 1 if value > 0 else -1
    # p/q = p*q / q**2
    product = abs(value.numerator) * value.denominator
    m = 1
    for prime in _odd_primes_of(product, bound):
        m *= prime
    return sign, m


def square_class_vectors(
    values: Sequence[Fraction], bound: int = TRIAL_DIVISION_BOUND
) -> Tuple[List[int], List[int]]:
    """GF(2) vectors of the square classes of ``values`` as bitmasks.

    Bit 0 stands for the sign; bit ``k + 1`` for the ``k``-th prime in the
    returned prime list.
    """

    factored = []
    primes: Dict[int, int] = {}
    for value in values:
        value = Fraction(value)
        if value == 0:
            raise ValueError("multiquadratic degree needs nonzero values")
        odd = _odd_primes_of(abs(value.numerator) * value.denominator, bound)
        factored.append((value < 0, odd))
        for prime in odd:
            primes.setdefault(prime, 0)
    ordered = sorted(primes)
    position = {prime: index + 1 for index, prime in enumerate(ordered)}
    vectors = []
    for negative, odd in factored:
        vector = 1 if negative else 0
        for prime in odd:
            vector |= 1 << position[prime]
        vectors.append(vector)
    return vectors, ordered


def gf2_rank(vectors: Sequence[int]) -> int:
    """Rank over GF(2) of integer-encoded row vectors."""

    basis: Dict[int, int] = {}
    for vector in vectors:
        while vector:
            pivot = vector.bit_length() - 1
            if pivot not in basis:
                basis[pivot] = vector
                break
            vector ^= basis[pivot]
    return len(basis)


def is_rational_square(value: Fraction) -> bool:
    value = Fraction(value)
    if value < 0:
        return False
    num_root = isqrt(value.numerator)
    den_root = isqrt(value.denominator)
    return num_root * num_root == value.numerator and den_root * den_root == value.denominator


def square_subset_count(values: Sequence[Fraction]) -> int:
    """Number of subsets (empty one included) whose product is a rational square."""

    count = 0
    size = len(values)
    for mask in range(1 << size):
        product = Fraction(1)
        for index in range(size):
            if mask >> index & 1:
                product *= values[index]
        if is_rational_square(product):
            count += 1
    return count


def multiquadratic_degree(
    values: Sequence[Fraction],
    bound: int = TRIAL_DIVISION_BOUND,
    brute_force_limit: int = BRUTE_FORCE_LIMIT,
) -> int:
    """Degree of Q(sqrt(a_1), ..., sqrt(a_k)) over Q.

    Equal to 2**rank of the square-class vectors. For k up to
    ``brute_force_limit`` the subset-product criterion (the degree is
    2**k divided by the number of square subset products) is evaluated too
    and must agree.
    """

    values = [Fraction(value) for value in values]
    vectors, _ = square_class_vectors(values, bound)
    rank = gf2_rank(vectors)
    degree = 1 << rank
    if len(values) <= brute_force_limit:
        brute = (1 << len(values)) // square_subset_count(values)
        if brute != degree:
            raise DegreeMismatchError(
                f"Rank method gives {degree}, subset products give {brute} for {values}"
            )
    return degree


@dataclass(frozen=True)
class DegreeReport:
    values: Tuple[Fraction, ...]
    degree: int
    rank: int
    witness: Optional[Tuple[int, ...]]

    def to_json(self) -> dict:
        return {
            "values": [str(value) for value in self.values],
            "degree": self.degree,
            "rank": self.rank,
            "witness": None if self.witness is None else [str(self.values[i]) for i in self.witness],
        }


def witness_subset(values: Sequence[Fraction]) -> Optional[Tuple[int, ...]]:
    """Indices of a smallest nonempty subset with square product, if any."""

    values = [Fraction(value) for value in values]
    for size in range(1, len(values) + 1):
        for subset in combinations(range(len(values)), size):
            product = Fraction(1)
            for index in subset:
                product *= values[index]
            if is_rational_square(product):
                return subset
    return None


def degree_report(
    values: Sequence[Fraction],
    bound: int = TRIAL_DIVISION_BOUND,
    brute_force_limit: int = BRUTE_FORCE_LIMIT,
) -> DegreeReport:
    values = tuple(Fraction(value) for value in values)
    degree = multiquadratic_degree(values, bound, brute_force_limit)
    rank = degree.bit_length() - 1
    witness = None
    if degree < (1 << len(values)) and len(values) <= brute_force_limit:
        witness = witness_subset(values)
    return DegreeReport(values, degree, rank, witness)


def rational_radicands_independent(tower: Tower, bound: int = TRIAL_DIVISION_BOUND) -> bool:
    """True iff the rational radicands of ``tower`` give a full-degree multiquadratic layer."""

    radicands = [value for _, value in tower.rational_radicands()]
    if not radicands:
        return True
    vectors, _ = square_class_vectors(radicands, bound)
    return gf2_rank(vectors) == len(radicands)
