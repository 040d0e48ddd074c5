"""Galois groups of type-1 graphs from the partitions of their Henneberg steps.

``build_galois`` follows the recursive characterisation: level by level the
group of the first ``l - 1`` steps is lifted to the new realizations, and one
reflection of the new vertex per distance block is added. Its order is
``2 ** sum(k_l)``. ``brute_force_galois`` filters the full symmetric group by
the area-equality condition and serves as an oracle for small graphs.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from exact_tower.tower import TowerElement
from galois_engine.permutations import (
    ENUMERATION_CAP,
    DegreeTooLargeError,
    InternalInconsistencyError,
    Perm,
    PermGroup,
    Provenance,
    closure,
    compose,
    group_from_generators,
    identity,
    inverse,
)
from graph_core.graph import Move
from realization_engine.enumeration import RealizationSet

BRUTE_FORCE_DEGREE_CAP = 8

AreaClasses = List[List[int]]


class LiftConvention(str, Enum):
    """How a permutation of step ``l - 1`` realizations acts on the new sign.

    ``PRESERVE`` keeps the sign relative to the block's root. ``FLIP_FIRST``
    additionally reflects the new vertex on the first block, i.e. composes
    the canonical lift with a kernel flip.
    """

    PRESERVE = "preserve"
    FLIP_FIRST = "flip-first"


@dataclass(frozen=True)
class StepPartition:
    """Prefix realizations of step ``step`` grouped by the squared base-pair distance."""

    step: int
    move: Move
    blocks: Tuple[FrozenSet[int], ...]
    lambdas: Tuple[TowerElement, ...]

    @property
    def k(self) -> int:
        return len(self.blocks)

    def block_set(self) -> FrozenSet[FrozenSet[int]]:
        return frozenset(self.blocks)

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "move": list(self.move),
            "k": self.k,
            "blocks": [sorted(block) for block in self.blocks],
        }


def step_partitions(rs: RealizationSet) -> List[StepPartition]:
    parts: List[StepPartition] = []
    for l in range(1, rs.steps + 1):
        grouped: Dict[tuple, List[int]] = {}
        values: Dict[tuple, TowerElement] = {}
        for realization in rs.prefix_realizations(l - 1):
            value = realization.step_lambda[l]
            grouped.setdefault(value.key(), []).append(realization.mask)
            values.setdefault(value.key(), value)
        # dicts keep first-seen order, so blocks are ordered by smallest prefix
        parts.append(
            StepPartition(
                step=l,
                move=rs.sequence.step(l),
                blocks=tuple(frozenset(masks) for masks in grouped.values()),
                lambdas=tuple(values[key] for key in grouped),
            )
        )
    return parts


def k_sequence(parts: Sequence[StepPartition]) -> List[int]:
    return [part.k for part in parts]


def area_classes(rs: RealizationSet) -> AreaClasses:
    """Per step, the class id of every realization under exact equality of the step area."""

    classes: AreaClasses = []
    for l in range(1, rs.steps + 1):
        ids: Dict[tuple, int] = {}
        row = []
        for realization in rs.realizations:
            key = realization.step_area[l].key()
            row.append(ids.setdefault(key, len(ids)))
        classes.append(row)
    return classes


def _flip(degree: int, bit: int, block: FrozenSet[int]) -> Perm:
    return tuple(mask ^ bit if mask & (bit - 1) in block else mask for mask in range(degree))


def _lift(g: Perm, bit: int, convention: LiftConvention, first_block: FrozenSet[int]) -> Perm:
    low_mask = bit - 1
    lifted = []
    for mask in range(2 * bit):
        low = mask & low_mask
        sign = mask & bit
        if convention is LiftConvention.FLIP_FIRST and low in first_block:
            sign ^= bit
        lifted.append(g[low] | sign)
    return tuple(lifted)


def _extend(g: Perm, degree: int) -> Perm:
    """Act as ``g`` on the low bits and fix every higher sign."""

    width = len(g)
    return tuple(g[mask % width] + (mask - mask % width) for mask in range(degree))


def build_galois(
    rs: RealizationSet,
    parts: Optional[Sequence[StepPartition]] = None,
    lift: LiftConvention = LiftConvention.PRESERVE,
    cap: int = ENUMERATION_CAP,
) -> PermGroup:
    if parts is None:
        parts = step_partitions(rs)
    generators: List[Perm] = []
    degree = 1
    for part in parts:
        bit = degree
        blocks = part.block_set()
        lifted: List[Perm] = []
        for g in generators:
            for block in part.blocks:
                image = frozenset(g[mask] for mask in block)
                if image not in blocks:
                    raise InternalInconsistencyError(
                        f"Step {part.step}: a lifted generator maps block {sorted(block)} "
                        f"onto {sorted(image)}, which is not a distance block"
                    )
            lifted.append(_lift(g, bit, LiftConvention(lift), part.blocks[0]))
        degree *= 2
        flips = [_flip(degree, bit, block) for block in part.blocks]
        generators = lifted + flips
    order = 1 << sum(part.k for part in parts)
    if degree != len(rs):
        raise InternalInconsistencyError(f"{len(rs)} realizations but {degree} sign vectors")
    return group_from_generators(generators, degree, order, Provenance.RECURSIVE, cap)


def flip_generators(rs: RealizationSet, parts: Sequence[StepPartition]) -> List[Perm]:
    """Every block reflection of every step, as permutations of all realizations."""

    degree = len(rs)
    result = []
    for part in parts:
        bit = 1 << (part.step - 1)
        for block in part.blocks:
            result.append(_extend(_flip(2 * bit, bit, block), degree))
    return result


# ---------------------------------------------------------------------------
# Brute force


def _respects_classes(p: Perm, classes: AreaClasses) -> bool:
    for row in classes:
        image: Dict[int, int] = {}
        for point, target in enumerate(p):
            cls = row[point]
            mapped = row[target]
            if image.setdefault(cls, mapped) != mapped:
                return False
    return True


def _filter_with_first(args: Tuple[int, int, AreaClasses]) -> List[Perm]:
    degree, first, classes = args
    rest = [point for point in range(degree) if point != first]
    found = []
    for tail in permutations(rest):
        p = (first,) + tail
        if _respects_classes(p, classes):
            found.append(p)
    return found


def _generating_subset(elements: Sequence[Perm], degree: int) -> List[Perm]:
    generated = {identity(degree)}
    gens: List[Perm] = []
    for element in elements:
        if element not in generated:
            gens.append(element)
            generated = set(closure(gens, degree))
    return gens


def brute_force_galois(
    rs: RealizationSet,
    classes: Optional[AreaClasses] = None,
    degree_cap: int = BRUTE_FORCE_DEGREE_CAP,
    workers: int = 1,
) -> PermGroup:
    """All permutations h with: equal step-l areas of r, r' imply equal areas of h(r), h(r')."""

    degree = len(rs)
    if degree > degree_cap:
        raise DegreeTooLargeError(f"Brute force needs at most {degree_cap} realizations, got {degree}")
    if classes is None:
        classes = area_classes(rs)
    chunks = [(degree, first, classes) for first in range(degree)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_filter_with_first, chunks))
    else:
        results = [_filter_with_first(chunk) for chunk in chunks]
    elements = sorted(p for chunk in results for p in chunk)
    found = set(elements)
    if identity(degree) not in found:
        raise InternalInconsistencyError("Identity fails the area condition")
    for a in elements:
        for b in elements:
            if compose(a, b) not in found:
                raise InternalInconsistencyError("Filtered permutations are not closed under composition")
    return PermGroup(
        degree,
        _generating_subset(elements, degree),
        len(elements),
        Provenance.BRUTE_FORCE,
        elements,
    )


# ---------------------------------------------------------------------------
# Checks


def verify_block_invariance(pg: PermGroup, classes: AreaClasses) -> List[str]:
    """Generators must map every area class of every step exactly onto a class."""

    problems = []
    for l, row in enumerate(classes, start=1):
        members: Dict[int, FrozenSet[int]] = {}
        for point, cls in enumerate(row):
            members[cls] = members.get(cls, frozenset()) | {point}
        class_sets = set(members.values())
        for index, g in enumerate(pg.generators):
            for cls, points in sorted(members.items()):
                image = frozenset(g[point] for point in points)
                if image not in class_sets:
                    problems.append(f"step {l}: generator {index} maps class {cls} onto a non-class")
    return problems


def transport(pg: PermGroup, mapping: Sequence[int]) -> PermGroup:
    """Re-index ``pg`` through ``mapping`` (our index -> index in ``pg``)."""

    return pg.conjugate(inverse(tuple(mapping)))
