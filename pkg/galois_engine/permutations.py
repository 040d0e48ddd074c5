"""Permutations of realization indices and groups generated by them."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from sympy.combinatorics import Permutation

Perm = Tuple[int, ...]

ENUMERATION_CAP = 2**20


class GaloisError(RuntimeError):
    """Base class for group construction failures."""


class InternalInconsistencyError(GaloisError):
    """Raised when a construction step contradicts an invariant it relies on."""


class DegreeTooLargeError(GaloisError):
    """Raised when a group or permutation set is too large to enumerate."""


class Provenance(str, Enum):
    RECURSIVE = "recursive"
    BRUTE_FORCE = "brute-force"


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """``p`` after ``q``: i -> p[q[i]]."""

    return tuple(p[i] for i in q)


def inverse(p: Sequence[int]) -> Perm:
    result = [0] * len(p)
    for i, image in enumerate(p):
        result[image] = i
    return tuple(result)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def cycle_notation(p: Sequence[int]) -> str:
    """Cycle notation on 0-based points, ``()`` for the identity."""

    cycles = Permutation(list(p)).cyclic_form
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(point) for point in cycle) + ")" for cycle in cycles)


def element_order(p: Sequence[int]) -> int:
    return int(Permutation(list(p)).order())


def fixed_points(p: Sequence[int]) -> int:
    return sum(1 for i, image in enumerate(p) if i == image)


def closure(generators: Iterable[Sequence[int]], degree: int, cap: int = ENUMERATION_CAP) -> List[Perm]:
    """All products of ``generators``, breadth first from the identity.

    Raises :class:`DegreeTooLargeError` once more than ``cap`` elements are found.
    """

    gens = [tuple(g) for g in generators]
    for g in gens:
        if len(g) != degree or not is_permutation(g):
            raise ValueError(f"Generator {g} is not a permutation of 0..{degree - 1}")
    start = identity(degree)
    seen: Set[Perm] = {start}
    ordered = [start]
    frontier = [start]
    while frontier:
        following: List[Perm] = []
        for element in frontier:
            for g in gens:
                product = compose(g, element)
                if product not in seen:
                    seen.add(product)
                    ordered.append(product)
                    following.append(product)
                    if len(seen) > cap:
                        raise DegreeTooLargeError(f"Closure exceeds the enumeration cap of {cap}")
        frontier = following
    return ordered


@dataclass
class PermGroup:
    """A permutation group on the realization indices 0..degree-1."""

    degree: int
    generators: List[Perm]
    order: int
    provenance: Provenance
    elements: Optional[List[Perm]] = None
    _element_set: Optional[Set[Perm]] = field(default=None, init=False, repr=False, compare=False)

    @property
    def enumerated(self) -> bool:
        return self.elements is not None

    def element_set(self) -> Set[Perm]:
        if self.elements is None:
            raise DegreeTooLargeError(f"Group of order {self.order} was not enumerated")
        if self._element_set is None:
            self._element_set = set(self.elements)
        return self._element_set

    def contains(self, p: Sequence[int]) -> bool:
        return tuple(p) in self.element_set()

    def conjugate(self, perm: Sequence[int]) -> "PermGroup":
        """The group ``perm * G * perm**-1``, with elements when available."""

        perm = tuple(perm)
        inv = inverse(perm)

        def conj(g: Perm) -> Perm:
            return compose(perm, compose(g, inv))

        elements = None if self.elements is None else sorted(conj(g) for g in self.elements)
        return PermGroup(
            self.degree,
            [conj(g) for g in self.generators],
            self.order,
            self.provenance,
            elements,
        )

    def same_elements(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.element_set() == other.element_set()


def group_from_generators(
    generators: Sequence[Sequence[int]],
    degree: int,
    order: int,
    provenance: Provenance,
    cap: int = ENUMERATION_CAP,
) -> PermGroup:
    """Group with a known order, enumerated when ``order <= cap``."""

    gens = [tuple(g) for g in generators]
    elements: Optional[List[Perm]] = None
    if order <= cap:
        elements = sorted(closure(gens, degree, cap))
        if len(elements) != order:
            raise InternalInconsistencyError(
                f"Generators close to {len(elements)} elements, expected {order}"
            )
    return PermGroup(degree, gens, order, provenance, elements)
