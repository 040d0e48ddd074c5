"""Graph representation, minimal-rigidity checks and Henneberg 1-step sequences."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx

Edge = Tuple[int, int]
Move = Tuple[int, int, int]

EXHAUSTIVE_LAMAN_LIMIT = 12


class GraphError(ValueError):
    """Base class for graph input and structure errors."""


class GraphFormatError(GraphError):
    """Raised when a graph description cannot be parsed."""


class DuplicateEdgeError(GraphError):
    """Raised when an edge is listed twice."""


class BaseEdgeError(GraphError):
    """Raised when the requested base edge is not an edge of the graph."""


class NotLamanError(GraphError):
    """Raised when a graph is not minimally rigid in the plane."""


class NotType1Error(GraphError):
    """Raised when a graph cannot be built from its base edge by 1-steps alone."""


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n with a distinguished base edge.

    The base edge is ordered: ``base_edge[0]`` is pinned to (0, 0) and
    ``base_edge[1]`` to (1, 0) in every realization.
    """

    n: int
    edges: FrozenSet[Edge]
    base_edge: Edge

    def __post_init__(self) -> None:
        if self.n < 2:
            raise GraphFormatError("A graph needs at least two vertices")
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError(f"Self-loop on vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphFormatError(f"Edge ({u}, {v}) uses a vertex outside 1..{self.n}")
            if u > v:
                raise GraphFormatError(f"Edge ({u}, {v}) is not stored in normalized order")
        if normalize_edge(*self.base_edge) not in self.edges:
            raise BaseEdgeError(f"Base edge {self.base_edge} is not an edge of the graph")

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def neighbours(self, v: int) -> List[int]:
        return sorted(b if a == v else a for a, b in self.edges if v in (a, b))

    def with_base(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges, (u, v))

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph on ``vertices`` (which must contain the base edge), renumbered 1..k."""

        keep = sorted(set(vertices))
        index = {old: new for new, old in enumerate(keep, start=1)}
        edges = frozenset(
            normalize_edge(index[u], index[v]) for u, v in self.edges if u in index and v in index
        )
        base_u, base_v = self.base_edge
        if base_u not in index or base_v not in index:
            raise BaseEdgeError("Induced subgraph must contain both base vertices")
        return Graph(len(keep), edges, (index[base_u], index[base_v]))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.sorted_edges())
        return graph

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(edge) for edge in self.sorted_edges()],
            "base": list(self.base_edge),
        }


@dataclass(frozen=True)
class HennebergSequence:
    """Ordered 1-step moves ``(i, j, new)`` building a graph from its base edge."""

    base_edge: Edge
    moves: Tuple[Move, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def __getitem__(self, index: int) -> Move:
        return self.moves[index]

    def step(self, l: int) -> Move:
        """Move of step ``l`` (1-based, as steps are numbered in reports)."""

        return self.moves[l - 1]

    def order(self) -> List[int]:
        return list(self.base_edge) + [move[2] for move in self.moves]

    def to_json(self) -> List[List[int]]:
        return [list(move) for move in self.moves]


# ---------------------------------------------------------------------------
# Parsing


_BASE_RE = re.compile(r"^base\s*:\s*(-?\d+)\s+(-?\d+)\s*$", re.IGNORECASE)


def parse_graph(text: str, base: Optional[Sequence[int]] = None) -> Graph:
    """Parse an edge list or JSON graph description.

    Edge lists hold one ``u v`` pair per line with ``#`` comments and an
    optional ``base: u v`` header. JSON documents look like
    ``{"n": 5, "edges": [[1, 2], ...], "base": [1, 2]}``. Vertex numbers are
    renumbered to 1..n in increasing order when they are not already so.
    ``base`` overrides any base edge found in the text.
    """

    stripped = text.strip()
    if not stripped:
        raise GraphFormatError("Empty graph description")
    if stripped.startswith("{"):
        raw_edges, declared_n, declared_base = _parse_json(stripped)
    else:
        raw_edges, declared_n, declared_base = _parse_edge_list(stripped)

    if not raw_edges:
        raise GraphFormatError("Graph description contains no edges")

    seen: Set[Edge] = set()
    for u, v in raw_edges:
        if u == v:
            raise GraphFormatError(f"Self-loop on vertex {u}")
        key = normalize_edge(u, v)
        if key in seen:
            raise DuplicateEdgeError(f"Duplicate edge {key}")
        seen.add(key)

    labels = sorted({vertex for edge in raw_edges for vertex in edge})
    if declared_n is not None:
        if labels[0] < 1 or labels[-1] > declared_n:
            raise GraphFormatError(f"Edges use vertices outside 1..{declared_n}")
        index = {vertex: vertex for vertex in range(1, declared_n + 1)}
        n = declared_n
    else:
        index = {old: new for new, old in enumerate(labels, start=1)}
        n = len(labels)

    edges = frozenset(normalize_edge(index[u], index[v]) for u, v in raw_edges)
    requested = base if base is not None else declared_base
    if requested is None:
        base_edge = min(edges)
    else:
        if len(requested) != 2:
            raise GraphFormatError("A base edge needs exactly two vertices")
        try:
            base_edge = (index[int(requested[0])], index[int(requested[1])])
        except KeyError as exc:
            raise BaseEdgeError(f"Base vertex {exc.args[0]} does not occur in the graph") from exc
    return Graph(n, edges, base_edge)


def _parse_edge_list(text: str) -> Tuple[List[Edge], Optional[int], Optional[Tuple[int, int]]]:
    edges: List[Edge] = []
    base: Optional[Tuple[int, int]] = None
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        match = _BASE_RE.match(line)
        if match:
            base = (int(match.group(1)), int(match.group(2)))
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise GraphFormatError(f"Line {number}: expected 'u v', got {raw_line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise GraphFormatError(f"Line {number}: vertices must be integers") from exc
    return edges, None, base


def _parse_json(text: str) -> Tuple[List[Edge], Optional[int], Optional[Tuple[int, int]]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"Invalid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "edges" not in payload:
        raise GraphFormatError("JSON graph must be an object with an 'edges' list")
    edges = [_json_pair(item, "JSON edges must be pairs of integers") for item in _json_list(payload["edges"])]
    n = payload.get("n")
    if n is not None and not _is_json_int(n):
        raise GraphFormatError("JSON field 'n' must be an integer")
    base = payload.get("base")
    if base is not None:
        base = _json_pair(base, "JSON field 'base' must be a pair of integers")
    return edges, n, base


def _is_json_int(value: object) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _json_list(value: object) -> list:
    if not isinstance(value, list):
        raise GraphFormatError("JSON field 'edges' must be a list")
    return value


def _json_pair(value: object, message: str) -> Edge:
    if not isinstance(value, list) or len(value) != 2 or not all(_is_json_int(item) for item in value):
        raise GraphFormatError(f"{message}, got {value!r}")
    return value[0], value[1]


def format_edge_list(graph: Graph) -> str:
    lines = [f"base: {graph.base_edge[0]} {graph.base_edge[1]}"]
    lines.extend(f"{u} {v}" for u, v in graph.sorted_edges())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Laman checks


class _PebbleGame:
    """(2, 3)-pebble game on a growing directed multigraph."""

    def __init__(self, n: int) -> None:
        self._pebbles = {v: 2 for v in range(1, n + 1)}
        self._out: Dict[int, List[int]] = {v: [] for v in range(1, n + 1)}

    def try_insert(self, u: int, v: int) -> bool:
        while self._pebbles[u] + self._pebbles[v] < 4:
            if not (self._gather(u, v) or self._gather(v, u)):
                return False
        self._pebbles[u] -= 1
        self._out[u].append(v)
        return True

    def _gather(self, root: int, blocked: int) -> bool:
        parent: Dict[int, int] = {root: root}
        stack = [root]
        while stack:
            node = stack.pop()
            for head in self._out[node]:
                if head in parent or head == blocked:
                    continue
                parent[head] = node
                if self._pebbles[head] > 0:
                    self._move_pebble(head, root, parent)
                    return True
                stack.append(head)
        return False

    def _move_pebble(self, source: int, root: int, parent: Dict[int, int]) -> None:
        self._pebbles[source] -= 1
        self._pebbles[root] += 1
        node = source
        while node != root:
            prev = parent[node]
            self._out[prev].remove(node)
            self._out[node].append(prev)
            node = prev


def is_laman(graph: Graph) -> bool:
    """True iff ``graph`` is minimally rigid in the plane (pebble game)."""

    if len(graph.edges) != 2 * graph.n - 3:
        return False
    game = _PebbleGame(graph.n)
    return all(game.try_insert(u, v) for u, v in graph.sorted_edges())


def is_laman_exhaustive(graph: Graph) -> bool:
    """Subset-enumeration Laman check; only for small graphs."""

    if graph.n > EXHAUSTIVE_LAMAN_LIMIT:
        raise GraphError(f"Exhaustive Laman check is limited to n <= {EXHAUSTIVE_LAMAN_LIMIT}")
    if len(graph.edges) != 2 * graph.n - 3:
        return False
    for size in range(2, graph.n):
        for subset in combinations(graph.vertices, size):
            chosen = set(subset)
            count = sum(1 for u, v in graph.edges if u in chosen and v in chosen)
            if count > 2 * size - 3:
                return False
    return True


# ---------------------------------------------------------------------------
# Henneberg 1-step sequences


def henneberg1_sequence(graph: Graph) -> HennebergSequence:
    """Extract a 1-step construction sequence by peeling degree-2 vertices.

    The lowest-numbered removable vertex is always taken first.
    """

    base = set(graph.base_edge)
    adjacency: Dict[int, Set[int]] = {v: set() for v in graph.vertices}
    for u, v in graph.edges:
        adjacency[u].add(v)
        adjacency[v].add(u)

    removed: List[Move] = []
    while len(adjacency) > 2:
        candidates = [v for v in sorted(adjacency) if v not in base and len(adjacency[v]) == 2]
        if not candidates:
            raise NotType1Error(
                f"No removable degree-2 vertex among {sorted(adjacency)}; the graph is not type-1"
            )
        vertex = candidates[0]
        i, j = sorted(adjacency.pop(vertex))
        adjacency[i].discard(vertex)
        adjacency[j].discard(vertex)
        removed.append((i, j, vertex))

    u, v = graph.base_edge
    if set(adjacency) != base or v not in adjacency[u]:
        raise NotType1Error("Peeling did not end at the base edge")
    sequence = HennebergSequence(graph.base_edge, tuple(reversed(removed)))
    validate_sequence(graph, sequence)
    return sequence


def all_henneberg1_sequences(graph: Graph, limit: Optional[int] = None) -> List[HennebergSequence]:
    """Every valid 1-step sequence from the base edge, in lexicographic order of moves."""

    results: List[HennebergSequence] = []
    adjacency = {v: set(graph.neighbours(v)) for v in graph.vertices}

    def extend(placed: List[int], moves: List[Move]) -> None:
        if limit is not None and len(results) >= limit:
            return
        if len(placed) == graph.n:
            results.append(HennebergSequence(graph.base_edge, tuple(moves)))
            return
        placed_set = set(placed)
        for vertex in graph.vertices:
            if vertex in placed_set:
                continue
            earlier = adjacency[vertex] & placed_set
            if len(earlier) != 2:
                continue
            i, j = sorted(earlier)
            moves.append((i, j, vertex))
            placed.append(vertex)
            extend(placed, moves)
            placed.pop()
            moves.pop()

    extend(list(graph.base_edge), [])
    return [seq for seq in results if _replays_exactly(graph, seq)]


def replay_sequence(sequence: HennebergSequence) -> FrozenSet[Edge]:
    edges = {normalize_edge(*sequence.base_edge)}
    for i, j, new in sequence:
        edges.add(normalize_edge(i, new))
        edges.add(normalize_edge(j, new))
    return frozenset(edges)


def validate_sequence(graph: Graph, sequence: HennebergSequence) -> None:
    if len(sequence) != graph.n - 2:
        raise NotType1Error(f"Sequence has {len(sequence)} moves, expected {graph.n - 2}")
    existing = set(sequence.base_edge)
    for step, (i, j, new) in enumerate(sequence, start=1):
        if new in existing:
            raise NotType1Error(f"Step {step}: vertex {new} already exists")
        if i not in existing or j not in existing or i == j:
            raise NotType1Error(f"Step {step}: ({i}, {j}) are not two existing vertices")
        existing.add(new)
    if replay_sequence(sequence) != graph.edges:
        raise NotType1Error("Replaying the sequence does not reproduce the edge set")


def _replays_exactly(graph: Graph, sequence: HennebergSequence) -> bool:
    try:
        validate_sequence(graph, sequence)
    except NotType1Error:
        return False
    return True
