"""Built-in graphs.

Small named graphs used by the command line (``catalog:<key>``) and the test
suite, so that the worked five-vertex example and the usual negative cases
are available without a graph file.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from graph_core.graph import Graph, normalize_edge


@dataclass(frozen=True)
class GraphInfo:
    """Description of a catalogued graph."""

    key: str
    title: str
    edges: Sequence[Tuple[int, int]]
    base: Tuple[int, int] = (1, 2)

    def build(self) -> Graph:
        edges = frozenset(normalize_edge(u, v) for u, v in self.edges)
        n = max(vertex for edge in edges for vertex in edge)
        return Graph(n, edges, self.base)


# NOTE: Keep entries sorted by key.
ALL_GRAPHS: List[GraphInfo] = [
    GraphInfo("d4z2", "Five-vertex type-1 graph with Galois group D4 x Z2",
              ((1, 3), (1, 2), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5))),
    GraphInfo("k33", "Complete bipartite K3,3 (Laman, no degree-2 vertex)",
              ((1, 4), (1, 5), (1, 6), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6)), (1, 4)),
    GraphInfo("k4", "Complete graph K4 (over-braced)",
              ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))),
    GraphInfo("klein4", "Four-vertex subgraph with Galois group Z2 x Z2",
              ((1, 3), (1, 2), (2, 3), (1, 4), (2, 4))),
    GraphInfo("prism", "Triangular prism (Laman, 3-connected)",
              ((1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6))),
    GraphInfo("strip6", "Triangle strip on six vertices",
              ((1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5), (4, 6), (5, 6))),
    GraphInfo("triangle", "Triangle", ((1, 2), (1, 3), (2, 3))),
]

GRAPH_INDEX: Dict[str, GraphInfo] = {info.key: info for info in ALL_GRAPHS}


def get_graph_info(key: str) -> Optional[GraphInfo]:
    """Return the catalogued graph for a key, if available."""

    return GRAPH_INDEX.get(key)
