from fractions import Fraction

import pytest

from graph_core.catalog import ALL_GRAPHS, get_graph_info
from graph_core.generators import enumerate_type1_graphs, random_graph, random_type1_graph
from graph_core.graph import (
    BaseEdgeError,
    DuplicateEdgeError,
    GraphError,
    GraphFormatError,
    NotType1Error,
    all_henneberg1_sequences,
    format_edge_list,
    henneberg1_sequence,
    is_laman,
    is_laman_exhaustive,
    parse_graph,
    replay_sequence,
)
from graph_core.labelling import labelling_from_mapping, random_labelling


@pytest.fixture
def example_graph():
    return get_graph_info("d4z2").build()


def test_parse_edge_list_with_comments_and_base():
    text = """
    # the triangle
    base: 2 3
    1 2
    2 3   # second edge
    1 3
    """
    graph = parse_graph(text)
    assert graph.n == 3
    assert graph.sorted_edges() == [(1, 2), (1, 3), (2, 3)]
    assert graph.base_edge == (2, 3)


def test_parse_renumbers_vertices_and_defaults_base():
    graph = parse_graph("0 1\n1 2\n0 2\n")
    assert graph.n == 3
    assert graph.base_edge == (1, 2)


def test_parse_json_graph():
    graph = parse_graph('{"n": 3, "edges": [[1, 2], [2, 3], [1, 3]], "base": [1, 3]}')
    assert graph.base_edge == (1, 3)
    assert parse_graph(format_edge_list(graph)) == graph


@pytest.mark.parametrize(
    "text, error",
    [
        ("", GraphFormatError),
        ("1 2\n2 1\n", DuplicateEdgeError),
        ("1 1\n", GraphFormatError),
        ("1 2 3\n", GraphFormatError),
        ("a b\n", GraphFormatError),
        ("{not json", GraphFormatError),
        ('{"edges": [[1, 2], [1.9, 3.7], [2, 3]]}', GraphFormatError),
        ('{"edges": [[1, 2], [true, 3], [2, 3]]}', GraphFormatError),
        ('{"edges": [[1, 2], ["1", 3], [2, 3]]}', GraphFormatError),
        ('{"edges": [[1, 2, 3]]}', GraphFormatError),
        ('{"edges": {"a": 1}}', GraphFormatError),
        ('{"edges": [[1, 2], [2, 3], [1, 3]], "base": [1.0, 2]}', GraphFormatError),
        ("base: 1 5\n1 2\n2 3\n1 3\n", BaseEdgeError),
    ],
)
def test_parse_rejects_malformed_input(text, error):
    with pytest.raises(error):
        parse_graph(text)


def test_base_edge_must_be_an_edge():
    with pytest.raises(BaseEdgeError):
        parse_graph("1 2\n2 3\n", base=(1, 3))


@pytest.mark.parametrize(
    "key, laman",
    [("triangle", True), ("d4z2", True), ("k4", False), ("k33", True), ("prism", True), ("strip6", True)],
)
def test_laman_checks_agree(key, laman):
    graph = get_graph_info(key).build()
    assert is_laman(graph) is laman
    assert is_laman_exhaustive(graph) is laman


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_laman_agrees_with_exhaustive_check_on_random_graphs(n):
    for seed in range(40):
        graph = random_graph(n, 2 * n - 3, seed)
        assert is_laman(graph) == is_laman_exhaustive(graph)


def test_henneberg_sequence_of_example(example_graph):
    """Lowest-index peeling removes 5, 3, 4, so vertex 4 is placed before 3.

    The listing (1,2,3), (1,2,4), (3,4,5) for this graph is the other valid
    sequence; peeling order wins and that listing is checked in
    test_all_sequences_of_example.
    """
    sequence = henneberg1_sequence(example_graph)
    assert sequence.moves == ((1, 2, 4), (1, 2, 3), (3, 4, 5))
    assert sequence.step(3) == (3, 4, 5)
    assert sequence.order() == [1, 2, 4, 3, 5]
    assert replay_sequence(sequence) == example_graph.edges


@pytest.mark.parametrize("key", ["k33", "prism"])
def test_laman_graphs_without_degree_two_vertices_are_not_type1(key):
    with pytest.raises(NotType1Error):
        henneberg1_sequence(get_graph_info(key).build())


def test_all_sequences_of_example(example_graph):
    sequences = all_henneberg1_sequences(example_graph)
    assert [seq.moves for seq in sequences] == [
        ((1, 2, 3), (1, 2, 4), (3, 4, 5)),
        ((1, 2, 4), (1, 2, 3), (3, 4, 5)),
    ]
    assert len(all_henneberg1_sequences(example_graph, limit=1)) == 1


def test_induced_subgraph_is_the_four_vertex_example(example_graph):
    sub = example_graph.induced([1, 2, 3, 4])
    assert sub == get_graph_info("klein4").build()


def test_catalog_is_sorted_by_key():
    keys = [info.key for info in ALL_GRAPHS]
    assert keys == sorted(keys)
    assert get_graph_info("missing") is None


def test_type1_generators():
    assert len(enumerate_type1_graphs(3)) == 1
    assert len(enumerate_type1_graphs(4)) == 1
    for seed in range(5):
        graph = random_type1_graph(7, seed)
        assert is_laman(graph)
        assert len(henneberg1_sequence(graph)) == 5


def test_random_labelling_is_deterministic(example_graph):
    first = random_labelling(example_graph, seed=3)
    second = random_labelling(example_graph, seed=3)
    assert first == second
    assert first[(2, 1)] == 1
    assert len(first) == 7
    assert all(value > 0 for value in first.as_dict().values())


def test_labelling_from_mapping_validates_edges():
    graph = get_graph_info("triangle").build()
    labelling = labelling_from_mapping(graph, {(1, 3): 2, (3, 2): Fraction(1, 3)})
    assert labelling[(1, 2)] == 1
    assert labelling.to_json() == {"1-2": "1", "1-3": "2", "2-3": "1/3"}
    with pytest.raises(GraphError):
        labelling_from_mapping(graph, {(1, 3): 2})
    with pytest.raises(GraphError):
        labelling_from_mapping(graph, {(1, 2): 2, (1, 3): 2, (2, 3): 2})
