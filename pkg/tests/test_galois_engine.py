import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from galois_engine.analysis import analyze, center, order_profile, real_count_spectrum, relation_triple
from galois_engine.construction import (
    LiftConvention,
    area_classes,
    brute_force_galois,
    build_galois,
    flip_generators,
    k_sequence,
    step_partitions,
    transport,
    verify_block_invariance,
)
from galois_engine.permutations import (
    DegreeTooLargeError,
    PermGroup,
    Provenance,
    closure,
    compose,
    cycle_notation,
    element_order,
    group_from_generators,
    identity,
    inverse,
)
from graph_core.catalog import get_graph_info
from graph_core.graph import HennebergSequence, henneberg1_sequence
from graph_core.labelling import labelling_from_mapping
from realization_engine.enumeration import enumerate_realizations, match_realizations

EXAMPLE_LABELS = {(1, 3): 2, (2, 3): 3, (1, 4): 5, (2, 4): 7, (3, 5): 11, (4, 5): 13}


def _realizations(key, labels):
    graph = get_graph_info(key).build()
    labelling = labelling_from_mapping(graph, labels)
    return enumerate_realizations(graph, henneberg1_sequence(graph), labelling)


@pytest.fixture
def example_rs():
    return _realizations("d4z2", EXAMPLE_LABELS)


@pytest.fixture
def triangle_rs():
    return _realizations("triangle", {(1, 3): 2, (2, 3): 3})


@pytest.fixture
def subgraph_rs():
    return _realizations("klein4", {(1, 3): 2, (2, 3): 3, (1, 4): 5, (2, 4): 7})


def test_permutation_helpers():
    p = (1, 2, 0, 3)
    assert compose(p, inverse(p)) == identity(4)
    assert compose((1, 0, 2), (0, 2, 1)) == (1, 2, 0)
    assert cycle_notation(p) == "(0 1 2)"
    assert cycle_notation(identity(3)) == "()"
    assert element_order(p) == 3
    assert len(closure([p], 4)) == 3
    with pytest.raises(DegreeTooLargeError):
        closure([(1, 2, 3, 0), (1, 0, 2, 3)], 4, cap=10)


def test_step_partitions_of_example(example_rs):
    parts = step_partitions(example_rs)
    assert k_sequence(parts) == [1, 1, 2]
    assert parts[0].blocks == (frozenset({0}),)
    assert parts[2].blocks == (frozenset({0, 3}), frozenset({1, 2}))
    assert parts[2].to_json()["blocks"] == [[0, 3], [1, 2]]


def test_area_classes_of_example(example_rs):
    classes = area_classes(example_rs)
    assert classes[0] == [0, 1, 0, 1, 0, 1, 0, 1]
    assert classes[1] == [0, 0, 1, 1, 0, 0, 1, 1]
    # step 3: (distance block, sign) with blocks {s1 == s2} and {s1 != s2}
    assert classes[2] == [0, 1, 1, 0, 2, 3, 3, 2]


def test_example_group_has_order_sixteen(example_rs):
    group = build_galois(example_rs)
    assert group.order == 16
    assert len(group.elements) == 16
    assert group.provenance is Provenance.RECURSIVE
    oracle = PermutationGroup([Permutation(list(g)) for g in group.generators])
    assert oracle.order() == 16


def test_brute_force_agrees_with_recursive_construction(example_rs):
    recursive = build_galois(example_rs)
    brute = brute_force_galois(example_rs)
    assert brute.order == 16
    assert brute.provenance is Provenance.BRUTE_FORCE
    assert recursive.same_elements(brute)


def test_example_group_profile(example_rs):
    group = build_galois(example_rs)
    assert order_profile(group) == {1: 1, 2: 11, 4: 4}
    assert len(center(group)) == 4
    assert real_count_spectrum(group) == [0, 4, 8]


def test_relation_triple_of_example(example_rs):
    group = build_galois(example_rs)
    h1, h2, h3 = relation_triple(group)
    e = identity(8)
    assert element_order(h1) == 4
    assert compose(h2, h2) == e and compose(h3, h3) == e
    assert compose(h2, compose(h1, h2)) == inverse(h1)
    assert compose(h3, h1) == compose(h1, h3)
    assert compose(h3, h2) == compose(h2, h3)
    assert len(closure([h1, h2, h3], 8)) == 16
    assert all(group.contains(h) for h in (h1, h2, h3))


def test_subgraph_group_is_klein_four(subgraph_rs):
    group = build_galois(subgraph_rs)
    assert group.order == 4
    assert order_profile(group) == {1: 1, 2: 3}
    assert brute_force_galois(subgraph_rs).same_elements(group)
    assert relation_triple(group) is None


def test_triangle_group(triangle_rs):
    group = build_galois(triangle_rs)
    assert group.order == 2
    assert group.generators == [(1, 0)]
    assert real_count_spectrum(group) == [0, 2]
    assert brute_force_galois(triangle_rs).same_elements(group)


def test_trivial_group_spectrum():
    group = group_from_generators([], 1, 1, Provenance.RECURSIVE)
    assert real_count_spectrum(group) == [1]


def test_generators_preserve_area_classes(example_rs):
    group = build_galois(example_rs)
    classes = area_classes(example_rs)
    assert verify_block_invariance(group, classes) == []
    assert all(group.contains(flip) for flip in flip_generators(example_rs, step_partitions(example_rs)))


def test_block_invariance_detects_bad_generators(example_rs):
    swap_two = (1, 0, 2, 3, 4, 5, 6, 7)
    bogus = PermGroup(8, [swap_two], 2, Provenance.RECURSIVE)
    assert verify_block_invariance(bogus, area_classes(example_rs))


def test_lift_conventions_generate_the_same_group(example_rs):
    canonical = build_galois(example_rs)
    flipped = build_galois(example_rs, lift=LiftConvention.FLIP_FIRST)
    assert canonical.generators != flipped.generators
    assert canonical.same_elements(flipped)


def test_group_does_not_depend_on_sequence(example_rs):
    other = enumerate_realizations(
        example_rs.graph,
        HennebergSequence((1, 2), ((1, 2, 3), (1, 2, 4), (3, 4, 5))),
        example_rs.labelling,
    )
    mapping = match_realizations(example_rs, other)
    moved = transport(build_galois(other), mapping)
    assert moved.same_elements(build_galois(example_rs))


def test_brute_force_degree_cap():
    rs = _realizations(
        "strip6",
        {(1, 3): 2, (2, 3): 3, (2, 4): 5, (3, 4): 7, (3, 5): 11, (4, 5): 13, (4, 6): 17, (5, 6): 19},
    )
    with pytest.raises(DegreeTooLargeError):
        brute_force_galois(rs)
    group = build_galois(rs)
    assert k_sequence(step_partitions(rs)) == [1, 1, 1, 1]
    assert group.order == 16
    assert order_profile(group) == {1: 1, 2: 15}


def test_analyze_report(example_rs):
    group = build_galois(example_rs)
    report = analyze(group, area_classes(example_rs), [1, 1, 2])
    payload = report.to_json()
    assert payload["order"] == 16
    assert payload["is_power_of_two"] is True
    assert payload["order_profile"] == {"1": 1, "2": 11, "4": 4}
    assert payload["center_size"] == 4
    assert payload["real_count_spectrum"] == [0, 4, 8]
    assert set(payload["relation_triple"]) == {"h1", "h2", "h3"}
    assert all(entry["verified"] for entry in payload["invariant_partitions"])
    assert len(payload["generators"]) == 4


def test_analyze_without_enumeration(example_rs):
    group = build_galois(example_rs, cap=8)
    assert group.elements is None
    report = analyze(group)
    assert report.order == 16
    assert report.order_profile is None
    assert report.real_count_spectrum is None
    with pytest.raises(DegreeTooLargeError):
        real_count_spectrum(group)
