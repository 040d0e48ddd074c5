"""Structural profile of a computed Galois group."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from galois_engine.construction import AreaClasses, verify_block_invariance
from galois_engine.permutations import (
    PermGroup,
    Perm,
    closure,
    compose,
    cycle_notation,
    element_order,
    fixed_points,
    identity,
    inverse,
)

RELATION_SEARCH_ORDER = 16


@dataclass
class GroupReport:
    degree: int
    order: int
    provenance: str
    k_sequence: List[int]
    is_power_of_two: bool
    generators: List[Perm]
    order_profile: Optional[Dict[int, int]] = None
    center_size: Optional[int] = None
    invariant_partitions: List[dict] = field(default_factory=list)
    relation_triple: Optional[Tuple[Perm, Perm, Perm]] = None
    real_count_spectrum: Optional[List[int]] = None

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "order": self.order,
            "provenance": self.provenance,
            "k_sequence": list(self.k_sequence),
            "is_power_of_two": self.is_power_of_two,
            "generators": [
                {"cycles": cycle_notation(g), "array": list(g)} for g in self.generators
            ],
            "order_profile": None
            if self.order_profile is None
            else {str(k): v for k, v in sorted(self.order_profile.items())},
            "center_size": self.center_size,
            "invariant_partitions": self.invariant_partitions,
            "relation_triple": None
            if self.relation_triple is None
            else {
                name: cycle_notation(h)
                for name, h in zip(("h1", "h2", "h3"), self.relation_triple)
            },
            "real_count_spectrum": self.real_count_spectrum,
        }


def order_profile(pg: PermGroup) -> Dict[int, int]:
    return dict(sorted(Counter(element_order(g) for g in pg.elements).items()))


def center(pg: PermGroup) -> List[Perm]:
    return [
        z
        for z in pg.elements
        if all(compose(z, g) == compose(g, z) for g in pg.generators)
    ]


def real_count_spectrum(pg: PermGroup) -> List[int]:
    """Fixed-point counts of the involutions of ``pg``, identity included.

    Complex conjugation acts on the realizations as one of these, and the
    real realizations are exactly its fixed points.
    """

    elements = pg.element_set()
    e = identity(pg.degree)
    return sorted({fixed_points(g) for g in elements if compose(g, g) == e})


def relation_triple(pg: PermGroup) -> Optional[Tuple[Perm, Perm, Perm]]:
    """Generators with h1**4 = h2**2 = h3**2 = e, h2 h1 h2 = h1**-1 and h3 central among them."""

    elements = sorted(pg.element_set())
    orders = {g: element_order(g) for g in elements}
    involutions = [g for g in elements if orders[g] == 2]
    for h1 in (g for g in elements if orders[g] == 4):
        h1_inv = inverse(h1)
        for h2 in involutions:
            if compose(h2, compose(h1, h2)) != h1_inv:
                continue
            dihedral = set(closure([h1, h2], pg.degree))
            for h3 in involutions:
                if h3 in dihedral:
                    continue
                if compose(h3, h1) != compose(h1, h3) or compose(h3, h2) != compose(h2, h3):
                    continue
                if len(closure([h1, h2, h3], pg.degree)) == pg.order:
                    return h1, h2, h3
    return None


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def analyze(
    pg: PermGroup,
    classes: Optional[AreaClasses] = None,
    k_sequence: Sequence[int] = (),
) -> GroupReport:
    report = GroupReport(
        degree=pg.degree,
        order=pg.order,
        provenance=pg.provenance.value,
        k_sequence=list(k_sequence),
        is_power_of_two=is_power_of_two(pg.order),
        generators=list(pg.generators),
    )
    if classes is not None:
        problems = verify_block_invariance(pg, classes)
        for l, row in enumerate(classes, start=1):
            grouped: Dict[int, List[int]] = {}
            for point, cls in enumerate(row):
                grouped.setdefault(cls, []).append(point)
            prefix = f"step {l}:"
            report.invariant_partitions.append(
                {
                    "step": l,
                    "classes": [grouped[cls] for cls in sorted(grouped)],
                    "verified": not any(p.startswith(prefix) for p in problems),
                }
            )
    if pg.enumerated:
        report.order_profile = order_profile(pg)
        report.center_size = len(center(pg))
        report.real_count_spectrum = real_count_spectrum(pg)
        if pg.order == RELATION_SEARCH_ORDER:
            report.relation_triple = relation_triple(pg)
    return report
