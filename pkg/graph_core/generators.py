"""Random and exhaustive graph generators for test corpora."""

from __future__ import annotations

import random
from itertools import combinations
from typing import List

import networkx as nx

from graph_core.graph import Graph, normalize_edge


def random_type1_graph(n: int, seed: int) -> Graph:
    """Type-1 graph on ``n`` vertices: each new vertex joins two random earlier ones."""

    if n < 2:
        raise ValueError("n must be at least 2")
    rng = random.Random(seed)
    edges = {(1, 2)}
    for new in range(3, n + 1):
        i, j = rng.sample(range(1, new), 2)
        edges.add(normalize_edge(i, new))
        edges.add(normalize_edge(j, new))
    return Graph(n, frozenset(edges), (1, 2))


def enumerate_type1_graphs(n: int) -> List[Graph]:
    """All type-1 graphs on ``n`` vertices built from base edge (1, 2), up to isomorphism."""

    if n < 2:
        raise ValueError("n must be at least 2")
    layer = [frozenset({(1, 2)})]
    for new in range(3, n + 1):
        grown = set()
        for edges in layer:
            for i, j in combinations(range(1, new), 2):
                grown.add(edges | {normalize_edge(i, new), normalize_edge(j, new)})
        layer = sorted(grown, key=sorted)

    representatives: List[nx.Graph] = []
    graphs: List[Graph] = []
    for edges in layer:
        graph = Graph(n, edges, (1, 2))
        candidate = graph.to_networkx()
        if any(nx.is_isomorphic(candidate, seen) for seen in representatives):
            continue
        representatives.append(candidate)
        graphs.append(graph)
    return graphs


def random_graph(n: int, m: int, seed: int) -> Graph:
    """Random simple graph with ``m`` edges containing the edge (1, 2)."""

    rng = random.Random(seed)
    pool = [edge for edge in combinations(range(1, n + 1), 2) if edge != (1, 2)]
    if m < 1 or m - 1 > len(pool):
        raise ValueError(f"Cannot place {m} edges on {n} vertices")
    chosen = {(1, 2), *rng.sample(pool, m - 1)}
    return Graph(n, frozenset(chosen), (1, 2))
