"""Exact enumeration of all realizations of a type-1 graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from exact_tower.numeric import ComplexBall
from exact_tower.tower import Tower, TowerElement
from graph_core.graph import Graph, HennebergSequence, validate_sequence
from graph_core.labelling import Labelling
from realization_engine.geometry import (
    GenericityFailure,
    Point,
    cayley_menger_determinant,
    place_vertex,
    point,
    squared_distance,
)


@dataclass
class Realization:
    """One compatible placement, identified by its sign vector.

    ``mask`` bit ``l - 1`` is set iff the sign of step ``l`` is -1.
    """

    mask: int
    signs: Tuple[int, ...]
    coords: Dict[int, Point]
    step_area: Dict[int, TowerElement] = field(default_factory=dict)
    step_lambda: Dict[int, TowerElement] = field(default_factory=dict)
    step_root: Dict[int, int] = field(default_factory=dict)


@dataclass
class RealizationSet:
    graph: Graph
    sequence: HennebergSequence
    labelling: Labelling
    tower: Tower
    realizations: List[Realization]

    def __len__(self) -> int:
        return len(self.realizations)

    def __getitem__(self, mask: int) -> Realization:
        return self.realizations[mask]

    @property
    def steps(self) -> int:
        return len(self.sequence)

    def prefix(self, l: int, mask: int) -> int:
        """Sign-vector prefix of ``mask`` covering steps 1..l."""

        return mask & ((1 << l) - 1)

    def prefix_realizations(self, l: int) -> List[Realization]:
        """Representatives of the 2**l placements of the first ``l`` steps."""

        return [self.realizations[mask] for mask in range(1 << l)]

    def pairs(self, l: int) -> List[Tuple[int, int]]:
        """Pairs of realizations that differ only in the sign of step ``l``."""

        bit = 1 << (l - 1)
        return [(mask, mask | bit) for mask in range(len(self.realizations)) if not mask & bit]

    def numeric_coords(self, precision: Fraction) -> List[Dict[int, Tuple[ComplexBall, ComplexBall]]]:
        return [
            {
                vertex: (x.numeric(precision), y.numeric(precision))
                for vertex, (x, y) in sorted(realization.coords.items())
            }
            for realization in self.realizations
        ]


def enumerate_realizations(
    graph: Graph, sequence: HennebergSequence, labelling: Labelling
) -> RealizationSet:
    """Depth-first placement over all sign vectors, sharing prefixes."""

    validate_sequence(graph, sequence)
    tower = Tower()
    v1, v2 = graph.base_edge
    start = {v1: point(tower, 0, 0), v2: point(tower, 1, 0)}
    steps = len(sequence)
    leaves: List[Optional[Realization]] = [None] * (1 << steps)

    def visit(l: int, mask: int, coords: Dict[int, Point], areas, lambdas, roots) -> None:
        if l > steps:
            signs = tuple(-1 if mask >> t & 1 else 1 for t in range(steps))
            leaves[mask] = Realization(mask, signs, coords, areas, lambdas, roots)
            return
        i, j, new = sequence.step(l)
        p_i, p_j = coords[i], coords[j]
        lam_ij = squared_distance(p_i, p_j)
        lam_in = labelling[(i, new)]
        lam_jn = labelling[(j, new)]
        for branch in (1, -1):
            placement = place_vertex(p_i, p_j, lam_in, lam_jn, branch, tower)
            if placement.root is None:
                raise GenericityFailure(
                    f"Step {l} ({i}, {j}, {new}): the two circles are tangent (beta^2 = 0)"
                )
            child = dict(coords)
            child[new] = placement.point
            visit(
                l + 1,
                mask if branch == 1 else mask | (1 << (l - 1)),
                child,
                {**areas, l: placement.area},
                {**lambdas, l: lam_ij},
                {**roots, l: placement.root},
            )

    visit(1, 0, start, {}, {}, {})
    return RealizationSet(graph, sequence, labelling, tower, [leaf for leaf in leaves if leaf is not None])


# ---------------------------------------------------------------------------
# Structural checks


def check_compatibility(rs: RealizationSet) -> List[str]:
    """Edges whose squared length is not reproduced exactly."""

    problems = []
    v1, v2 = rs.graph.base_edge
    for realization in rs.realizations:
        if realization.coords[v1] != (0, 0) or realization.coords[v2] != (1, 0):
            problems.append(f"realization {realization.mask}: base edge not pinned")
        for edge in rs.graph.sorted_edges():
            u, v = edge
            length = squared_distance(realization.coords[u], realization.coords[v])
            if not (length - rs.labelling[edge]).is_zero():
                problems.append(f"realization {realization.mask}: edge {edge} not reproduced")
    return problems


def check_pairing(rs: RealizationSet) -> List[str]:
    """Reflection pairs must share earlier vertices and have opposite step areas."""

    problems = []
    order = rs.sequence.order()
    for l in range(1, rs.steps + 1):
        earlier = order[: l + 1]
        for plus, minus in rs.pairs(l):
            a, b = rs[plus], rs[minus]
            if any(a.coords[v] != b.coords[v] for v in earlier):
                problems.append(f"step {l}: pair ({plus}, {minus}) differs before the step")
            if not (a.step_area[l] + b.step_area[l]).is_zero():
                problems.append(f"step {l}: pair ({plus}, {minus}) areas are not negatives")
    return problems


def check_area_cm(rs: RealizationSet) -> List[str]:
    """16 * area^2 + Cayley-Menger determinant must vanish for every step triangle."""

    problems = []
    for realization in rs.realizations:
        for l, (i, j, new) in enumerate(rs.sequence, start=1):
            det = cayley_menger_determinant(
                realization.step_lambda[l],
                rs.labelling[(i, new)] + rs.tower.zero(),
                rs.labelling[(j, new)] + rs.tower.zero(),
            )
            area = realization.step_area[l]
            if not (area * area * 16 + det).is_zero():
                problems.append(f"realization {realization.mask}: step {l} violates area/CM identity")
    return problems


def check_lambda_area_correspondence(rs: RealizationSet) -> None:
    """Equal base-pair distances must coincide with equal squared areas at every step."""

    for l in range(1, rs.steps + 1):
        prefixes = rs.prefix_realizations(l - 1)
        by_lambda: Dict[tuple, set] = {}
        by_area: Dict[tuple, set] = {}
        for realization in prefixes:
            area = realization.step_area[l]
            by_lambda.setdefault(realization.step_lambda[l].key(), set()).add(realization.mask)
            by_area.setdefault((area * area).key(), set()).add(realization.mask)
        if sorted(map(sorted, by_lambda.values())) != sorted(map(sorted, by_area.values())):
            raise GenericityFailure(
                f"Step {l}: distance classes and squared-area classes do not correspond"
            )


def match_realizations(
    first: RealizationSet, second: RealizationSet, precision: Fraction = Fraction(1, 10**20)
) -> List[int]:
    """Bijection ``first index -> second index`` between sets built from different sequences.

    Realizations are identified by certified numeric coordinates; the
    precision is refined until every match is unique.
    """

    if len(first) != len(second) or first.graph.edges != second.graph.edges:
        raise ValueError("Realization sets describe different graphs")
    vertices = list(first.graph.vertices)
    while True:
        left = first.numeric_coords(precision)
        right = second.numeric_coords(precision)
        mapping: List[int] = []
        ambiguous = False
        for coords in left:
            hits = [
                index
                for index, other in enumerate(right)
                if all(
                    coords[v][0].overlaps(other[v][0]) and coords[v][1].overlaps(other[v][1])
                    for v in vertices
                )
            ]
            if len(hits) != 1:
                ambiguous = True
                break
            mapping.append(hits[0])
        if not ambiguous and len(set(mapping)) == len(mapping):
            return mapping
        if precision < Fraction(1, 10**200):
            raise GenericityFailure("Realizations could not be told apart numerically")
        precision /= 10**20


def numeric_lambda_distinct(
    values: Sequence[TowerElement], max_bits_precision: Fraction = Fraction(1, 10**60)
) -> bool:
    """Certify that pairwise canonically distinct values are numerically distinct."""

    precision = Fraction(1, 10**12)
    while precision >= max_bits_precision:
        balls = [value.numeric(precision) for value in values]
        if all(
            not balls[a].overlaps(balls[b])
            for a in range(len(balls))
            for b in range(a + 1, len(balls))
        ):
            return True
        precision /= 10**12
    return False
