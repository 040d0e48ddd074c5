"""Squared edge-length labellings."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple

from graph_core.graph import Edge, Graph, GraphError, normalize_edge


@dataclass(frozen=True)
class Labelling:
    """Map from edge to exact squared length; the base edge always has length 1."""

    values: Tuple[Tuple[Edge, Fraction], ...]

    def __post_init__(self) -> None:
        for edge, value in self.values:
            if value <= 0:
                raise GraphError(f"Label of edge {edge} must be positive, got {value}")

    def as_dict(self) -> Dict[Edge, Fraction]:
        return dict(self.values)

    def __getitem__(self, edge: Tuple[int, int]) -> Fraction:
        key = normalize_edge(*edge)
        for stored, value in self.values:
            if stored == key:
                return value
        raise KeyError(edge)

    def __iter__(self) -> Iterator[Edge]:
        return (edge for edge, _ in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def to_json(self) -> Dict[str, str]:
        return {f"{u}-{v}": _fraction_text(value) for (u, v), value in self.values}


def labelling_from_mapping(graph: Graph, mapping: Mapping[Tuple[int, int], object]) -> Labelling:
    """Build a labelling from explicit values; missing base edge defaults to 1."""

    normalized = {normalize_edge(*edge): Fraction(value) for edge, value in mapping.items()}
    base = normalize_edge(*graph.base_edge)
    if normalized.setdefault(base, Fraction(1)) != 1:
        raise GraphError("The base edge must be labelled 1")
    missing = graph.edges - normalized.keys()
    if missing:
        raise GraphError(f"Missing labels for edges {sorted(missing)}")
    extra = normalized.keys() - graph.edges
    if extra:
        raise GraphError(f"Labels given for non-edges {sorted(extra)}")
    return Labelling(tuple(sorted(normalized.items())))


def random_labelling(graph: Graph, seed: int, bound: int = 100) -> Labelling:
    """Random rational labels p/q with 1 <= p, q <= bound, deterministic in ``seed``."""

    if bound < 1:
        raise GraphError("The random range bound must be positive")
    rng = random.Random(seed)
    base = normalize_edge(*graph.base_edge)
    values = []
    for edge in graph.sorted_edges():
        if edge == base:
            values.append((edge, Fraction(1)))
        else:
            values.append((edge, Fraction(rng.randint(1, bound), rng.randint(1, bound))))
    return Labelling(tuple(values))


def _fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
