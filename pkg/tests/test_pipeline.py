import json
from dataclasses import replace
from fractions import Fraction

import pytest

from controller import pipeline
from controller.config import SEED_ENV, ConfigError, RunConfig
from controller.pipeline import GaloisController, graph_digest, load_graph
from galois_engine.construction import step_partitions
from graph_core.catalog import get_graph_info
from graph_core.generators import random_type1_graph
from graph_core.graph import GraphFormatError, NotLamanError, NotType1Error, henneberg1_sequence
from graph_core.labelling import labelling_from_mapping, random_labelling
from realization_engine.geometry import GenericityFailure


def isoceles_labelling(graph, seed, bound):
    """Vertices 3 and 4 get the same distances to the base, so they can coincide."""

    labels = random_labelling(graph, seed, bound).as_dict()
    labels[(1, 4)] = labels[(1, 3)]
    labels[(2, 4)] = labels[(2, 3)]
    return labelling_from_mapping(graph, labels)


def test_load_graph_from_catalog_and_file(tmp_path):
    graph = load_graph("catalog:d4z2")
    assert graph.n == 5
    path = tmp_path / "triangle.txt"
    path.write_text("base: 1 3\n1 2\n2 3\n1 3\n", encoding="utf-8")
    assert load_graph(str(path)).base_edge == (1, 3)
    assert load_graph("catalog:triangle", base=(2, 3)).base_edge == (2, 3)
    with pytest.raises(GraphFormatError):
        load_graph("catalog:unknown")
    with pytest.raises(OSError):
        load_graph(str(tmp_path / "missing.txt"))


def test_analyze_example(db):
    report = GaloisController(db).analyze(RunConfig(graph_path="catalog:d4z2", seed=1))
    group = report["group"]
    assert report["realizations"] == 8
    assert group["k_sequence"] == [1, 1, 2]
    assert group["order"] == 16
    assert group["order_profile"] == {"1": 1, "2": 11, "4": 4}
    assert group["center_size"] == 4
    assert group["relation_triple"] is not None
    assert group["real_count_spectrum"] == [0, 4, 8]
    assert report["brute_force"] == {"checked": True, "agrees": True}

    history = list(db.history())
    assert len(history) == 1
    assert history[0].order == 16
    assert history[0].k_sequence == [1, 1, 2]
    messages = [record.message for record in db.fetch_logs()]
    assert "Labelling certified" in messages
    assert "Analyze finished" in messages


def test_analyze_is_deterministic(db):
    controller = GaloisController(db)
    config = RunConfig(graph_path="catalog:d4z2", seed=7)
    first = json.dumps(controller.analyze(config), sort_keys=True)
    second = json.dumps(controller.analyze(config), sort_keys=True)
    assert first == second


@pytest.mark.parametrize(
    "key, order, spectrum",
    [("triangle", 2, [0, 2]), ("klein4", 4, [0, 4])],
)
def test_analyze_small_graphs(db, key, order, spectrum):
    report = GaloisController(db).analyze(RunConfig(graph_path=f"catalog:{key}"))
    assert report["group"]["order"] == order
    assert report["group"]["real_count_spectrum"] == spectrum


@pytest.mark.parametrize("key, error", [("k4", NotLamanError), ("k33", NotType1Error), ("prism", NotType1Error)])
def test_analyze_rejects_unsuitable_graphs(db, key, error):
    with pytest.raises(error):
        GaloisController(db).analyze(RunConfig(graph_path=f"catalog:{key}"))
    assert db.fetch_logs()[-1].level == "error"


def test_protocol_certifies_both_seeds(db):
    graph = get_graph_info("d4z2").build()
    run = GaloisController(db).genericity_protocol(graph, henneberg1_sequence(graph), seed=1)
    assert run.seeds == (1, 2)
    assert run.attempt == 0
    assert run.k_sequence == [1, 1, 2]


def test_protocol_rejects_coinciding_points(db):
    graph = get_graph_info("d4z2").build()
    controller = GaloisController(db, labelling_factory=isoceles_labelling)
    with pytest.raises(GenericityFailure):
        controller.genericity_protocol(graph, henneberg1_sequence(graph), seed=1, attempts=3)
    rejected = [r for r in db.fetch_logs() if r.message == "Genericity attempt rejected"]
    assert len(rejected) == 3
    assert rejected[0].context["seeds"] == [1, 2]


def test_protocol_retries_after_a_bad_attempt(db):
    def factory(graph, seed, bound):
        if seed in (1, 2):
            return isoceles_labelling(graph, seed, bound)
        return random_labelling(graph, seed, bound)

    graph = get_graph_info("d4z2").build()
    controller = GaloisController(db, labelling_factory=factory)
    run = controller.genericity_protocol(graph, henneberg1_sequence(graph), seed=1)
    assert run.attempt == 1
    assert run.seeds == (3, 4)


def test_protocol_on_triangle(db):
    graph = get_graph_info("triangle").build()
    run = GaloisController(db).genericity_protocol(graph, henneberg1_sequence(graph), seed=5)
    assert run.k_sequence == [1]


def test_protocol_rejects_dependent_rational_radicands(db):
    # both apexes over the base need sqrt(3): y3**2 = 3/4 and y4**2 = 3
    def factory(graph, seed, bound):
        return labelling_from_mapping(graph, {(1, 3): 1, (2, 3): 1, (1, 4): 4, (2, 4): 3})

    graph = get_graph_info("klein4").build()
    controller = GaloisController(db, labelling_factory=factory)
    with pytest.raises(GenericityFailure):
        controller.genericity_protocol(graph, henneberg1_sequence(graph), seed=1, attempts=2)
    rejected = [r for r in db.fetch_logs() if r.message == "Genericity attempt rejected"]
    assert len(rejected) == 2
    assert all("dependent modulo squares" in r.context["reason"] for r in rejected)


def test_protocol_rejects_partitions_that_differ_between_seeds(db, monkeypatch):
    calls = []

    def alternating_partitions(rs):
        parts = step_partitions(rs)
        calls.append(rs)
        if len(calls) % 2 == 0:
            last = parts[-1]
            merged = frozenset().union(*last.blocks)
            parts[-1] = replace(last, blocks=(merged,), lambdas=last.lambdas[:1])
        return parts

    monkeypatch.setattr(pipeline, "step_partitions", alternating_partitions)
    graph = get_graph_info("d4z2").build()
    with pytest.raises(GenericityFailure):
        GaloisController(db).genericity_protocol(graph, henneberg1_sequence(graph), seed=1, attempts=2)
    rejected = [r for r in db.fetch_logs() if r.message == "Genericity attempt rejected"]
    assert [r.context["reason"] for r in rejected] == ["partitions differ between seeds"] * 2
    assert rejected[0].context["k_sequences"] == [[1, 1, 2], [1, 1, 1]]


def test_protocol_rejects_numerically_inseparable_blocks(db, monkeypatch):
    monkeypatch.setattr(pipeline, "numeric_lambda_distinct", lambda values: False)
    graph = get_graph_info("d4z2").build()
    with pytest.raises(GenericityFailure):
        GaloisController(db).genericity_protocol(graph, henneberg1_sequence(graph), seed=1, attempts=1)
    rejected = [r for r in db.fetch_logs() if r.message == "Genericity attempt rejected"]
    assert len(rejected) == 1
    assert "not numerically separated" in rejected[0].context["reason"]


def test_protocol_handles_large_composite_radicands(db):
    graph = random_type1_graph(6, 15)
    run = GaloisController(db).genericity_protocol(graph, henneberg1_sequence(graph), seed=16)
    assert len(run.realizations) == 16
    assert len(run.k_sequence) == 4


def test_realize_dump(db):
    payload = GaloisController(db).realize(
        RunConfig(graph_path="catalog:klein4", precision=Fraction(1, 10**6))
    )
    assert len(payload["realizations"]) == 4
    assert payload["precision"] == "1/1000000"


def test_mqdeg(db):
    controller = GaloisController(db)
    assert controller.mqdeg(["2", "3", "6"]).degree == 4
    assert controller.mqdeg(["2", "3", "5"]).witness is None
    with pytest.raises(ValueError):
        controller.mqdeg(["0"])
    with pytest.raises(ValueError):
        controller.mqdeg(["two"])


def test_graph_digest_depends_on_base_edge():
    first = load_graph("catalog:triangle")
    assert graph_digest(first) == graph_digest(first.with_base(1, 2))
    assert graph_digest(first) != graph_digest(first.with_base(1, 3))


def test_run_config_defaults_and_validation(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)
    config = RunConfig()
    assert config.seed == 1
    assert config.precision == Fraction(1, 10**12)
    assert config.cap == 2**20
    monkeypatch.setenv(SEED_ENV, "42")
    assert RunConfig().seed == 42
    with pytest.raises(ConfigError):
        RunConfig(trials=0)
    with pytest.raises(ConfigError):
        RunConfig(precision=0)
    with pytest.raises(ConfigError):
        RunConfig(base=(1, 1))
    monkeypatch.setenv(SEED_ENV, "abc")
    with pytest.raises(ConfigError):
        RunConfig()


def test_run_config_profile_round_trip(db):
    config = RunConfig(graph_path="catalog:triangle", seed=9, precision=Fraction(1, 10**6), base=(1, 3))
    db.save_profile("fine", config.to_profile())
    restored = RunConfig.from_profile(db.get_profile("fine"), graph_path="catalog:k4", trials=None)
    assert restored.seed == 9
    assert restored.precision == Fraction(1, 10**6)
    assert restored.base == (1, 3)
    assert restored.graph_path == "catalog:k4"
    assert restored.trials == 100
