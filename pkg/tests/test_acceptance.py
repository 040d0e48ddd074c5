"""Sweeps over small type-1 graphs; run with ``pytest -m slow``."""

import pytest

from controller.pipeline import GaloisController
from controller.sampler import sample_real_counts
from galois_engine.analysis import is_power_of_two, real_count_spectrum
from galois_engine.construction import (
    area_classes,
    brute_force_galois,
    build_galois,
    transport,
    verify_block_invariance,
)
from graph_core.generators import enumerate_type1_graphs, random_type1_graph
from graph_core.graph import all_henneberg1_sequences, henneberg1_sequence
from realization_engine.enumeration import (
    check_area_cm,
    check_compatibility,
    check_pairing,
    enumerate_realizations,
    match_realizations,
)

pytestmark = pytest.mark.slow


@pytest.fixture
def controller(db):
    return GaloisController(db)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_recursive_group_matches_brute_force(controller, n):
    for graph in enumerate_type1_graphs(n):
        for sequence in all_henneberg1_sequences(graph, limit=12):
            run = controller.genericity_protocol(graph, sequence, seed=17)
            rs = run.realizations
            group = build_galois(rs, run.partitions)
            brute = brute_force_galois(rs, area_classes(rs))
            assert group.same_elements(brute), (graph.sorted_edges(), sequence.to_json())
            assert is_power_of_two(group.order)


@pytest.mark.parametrize("n", [4, 5])
def test_group_does_not_depend_on_the_sequence(controller, n):
    for graph in enumerate_type1_graphs(n):
        sequences = all_henneberg1_sequences(graph)
        run = controller.genericity_protocol(graph, sequences[0], seed=23)
        reference = build_galois(run.realizations)
        for sequence in sequences[1:]:
            other = enumerate_realizations(graph, sequence, run.labelling)
            moved = transport(build_galois(other), match_realizations(run.realizations, other))
            assert moved.same_elements(reference), (graph.sorted_edges(), sequence.to_json())


@pytest.mark.parametrize("seed", range(20))
def test_random_graphs_give_two_groups(controller, seed):
    graph = random_type1_graph(6 + seed % 3, seed)
    run = controller.genericity_protocol(graph, henneberg1_sequence(graph), seed=seed + 1)
    rs = run.realizations
    assert check_compatibility(rs) == []
    assert check_pairing(rs) == []
    assert check_area_cm(rs) == []

    group = build_galois(rs, run.partitions)
    assert is_power_of_two(group.order)
    assert group.order == 2 ** sum(run.k_sequence)
    assert len(group.elements) == group.order
    assert verify_block_invariance(group, area_classes(rs)) == []
    assert max(real_count_spectrum(group)) == len(rs)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_sampled_counts_respect_the_spectrum(controller, n):
    for graph in enumerate_type1_graphs(n):
        sequence = henneberg1_sequence(graph)
        run = controller.genericity_protocol(graph, sequence, seed=31)
        spectrum = real_count_spectrum(build_galois(run.realizations, run.partitions))
        report = sample_real_counts(sequence, spectrum, trials=100, seed=n)
        assert report.violations == [], graph.sorted_edges()
