"""Run orchestration: graph loading, the genericity protocol and the analyze pipeline."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from controller.config import RunConfig
from controller.sampler import SampleReport, sample_real_counts
from exact_tower.quadratic import DegreeReport, degree_report, rational_radicands_independent
from exact_tower.tower import TowerDivisionError
from galois_engine.analysis import analyze, real_count_spectrum
from galois_engine.construction import (
    StepPartition,
    area_classes,
    brute_force_galois,
    build_galois,
    k_sequence,
    step_partitions,
)
from galois_engine.permutations import InternalInconsistencyError, PermGroup
from graph_core.catalog import get_graph_info
from graph_core.graph import (
    Graph,
    GraphFormatError,
    HennebergSequence,
    NotLamanError,
    format_edge_list,
    henneberg1_sequence,
    is_laman,
    parse_graph,
)
from graph_core.labelling import Labelling, random_labelling
from persistence.database import Database
from realization_engine.enumeration import (
    RealizationSet,
    check_area_cm,
    check_compatibility,
    check_lambda_area_correspondence,
    check_pairing,
    enumerate_realizations,
    numeric_lambda_distinct,
)
from realization_engine.export import realization_set_to_json
from realization_engine.geometry import GenericityFailure

CATALOG_PREFIX = "catalog:"

LabellingFactory = Callable[[Graph, int, int], Labelling]


@dataclass
class CertifiedRun:
    """Labelling accepted by the genericity protocol, with its enumeration."""

    labelling: Labelling
    realizations: RealizationSet
    partitions: List[StepPartition]
    seeds: Tuple[int, int]
    attempt: int

    @property
    def k_sequence(self) -> List[int]:
        return k_sequence(self.partitions)


def load_graph(source: str, base: Optional[Sequence[int]] = None) -> Graph:
    """Read a graph file, or a built-in graph given as ``catalog:<key>``."""

    if source.startswith(CATALOG_PREFIX):
        key = source[len(CATALOG_PREFIX):]
        info = get_graph_info(key)
        if info is None:
            raise GraphFormatError(f"Unknown catalog graph {key!r}")
        graph = info.build()
        return graph.with_base(*base) if base else graph
    try:
        text = Path(source).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise GraphFormatError(f"{source} is not UTF-8 text: {exc.reason}") from exc
    return parse_graph(text, base=base)


def graph_digest(graph: Graph) -> str:
    return hashlib.sha1(format_edge_list(graph).encode("utf-8")).hexdigest()[:16]


def _certify(rs: RealizationSet) -> List[StepPartition]:
    """Checks a single labelling must pass before its partitions are trusted."""

    check_lambda_area_correspondence(rs)
    if not rational_radicands_independent(rs.tower):
        raise GenericityFailure("Rational square roots of the tower are dependent modulo squares")
    parts = step_partitions(rs)
    for part in parts:
        if part.k > 1 and not numeric_lambda_distinct(part.lambdas):
            raise GenericityFailure(f"Step {part.step}: distance blocks are not numerically separated")
    return parts


class GaloisController:
    def __init__(
        self,
        database: Database,
        labelling_factory: Optional[LabellingFactory] = None,
    ) -> None:
        self._db = database
        self._labelling_factory = labelling_factory or random_labelling

    # -- building blocks --------------------------------------------------

    def prepare(self, config: RunConfig) -> Tuple[Graph, HennebergSequence]:
        if config.graph_path is None:
            raise GraphFormatError("No graph given")
        graph = load_graph(config.graph_path, config.base)
        if not is_laman(graph):
            raise NotLamanError(
                f"Graph with {graph.n} vertices and {len(graph.edges)} edges is not minimally rigid"
            )
        sequence = henneberg1_sequence(graph)
        return graph, sequence

    def genericity_protocol(
        self,
        graph: Graph,
        sequence: HennebergSequence,
        seed: int,
        bound: int = 100,
        attempts: int = 5,
    ) -> CertifiedRun:
        """Enumerate with two seeds and accept only when both give the same partitions."""

        for attempt in range(attempts):
            seeds = (seed + 2 * attempt, seed + 2 * attempt + 1)
            runs: List[Tuple[Labelling, RealizationSet, List[StepPartition]]] = []
            try:
                for run_seed in seeds:
                    labelling = self._labelling_factory(graph, run_seed, bound)
                    rs = enumerate_realizations(graph, sequence, labelling)
                    runs.append((labelling, rs, _certify(rs)))
            except (GenericityFailure, TowerDivisionError) as exc:
                self._db.log(
                    "warning",
                    "Genericity attempt rejected",
                    {"attempt": attempt, "seeds": list(seeds), "reason": str(exc)},
                )
                continue
            first, second = runs[0][2], runs[1][2]
            first_blocks = [part.block_set() for part in first]
            second_blocks = [part.block_set() for part in second]
            if first_blocks != second_blocks:
                self._db.log(
                    "warning",
                    "Genericity attempt rejected",
                    {
                        "attempt": attempt,
                        "seeds": list(seeds),
                        "reason": "partitions differ between seeds",
                        "k_sequences": [k_sequence(first), k_sequence(second)],
                    },
                )
                continue
            self._db.log(
                "info",
                "Labelling certified",
                {"attempt": attempt, "seeds": list(seeds), "k_sequence": k_sequence(first)},
            )
            labelling, rs, parts = runs[0]
            return CertifiedRun(labelling, rs, parts, seeds, attempt)
        self._db.log("error", "Genericity protocol exhausted", {"seed": seed, "attempts": attempts})
        raise GenericityFailure(f"No certified labelling after {attempts} attempts from seed {seed}")

    def compute_group(self, run: CertifiedRun, config: RunConfig) -> Tuple[PermGroup, Dict[str, object]]:
        rs = run.realizations
        problems = check_compatibility(rs) + check_pairing(rs) + check_area_cm(rs)
        if problems:
            self._db.log("error", "Structural checks failed", {"problems": problems[:20]})
            raise InternalInconsistencyError(problems[0])
        group = build_galois(rs, run.partitions, cap=config.cap)
        oracle: Dict[str, object] = {"checked": False, "agrees": None}
        if len(rs) <= config.brute_force_cap:
            brute = brute_force_galois(rs, area_classes(rs), config.brute_force_cap, config.workers)
            agrees = group.same_elements(brute)
            oracle = {"checked": True, "agrees": agrees}
            self._db.log("info", "Brute-force oracle compared", {"order": brute.order, "agrees": agrees})
            if not agrees:
                raise InternalInconsistencyError(
                    f"Recursive group of order {group.order} differs from brute force of order {brute.order}"
                )
        return group, oracle

    # -- commands ---------------------------------------------------------

    def analyze(self, config: RunConfig) -> dict:
        self._db.log("info", "Analyze requested", {"graph": config.graph_path, "seed": config.seed})
        try:
            graph, sequence = self.prepare(config)
            run = self.genericity_protocol(graph, sequence, config.seed, config.range, config.attempts)
            group, oracle = self.compute_group(run, config)
            report = analyze(group, area_classes(run.realizations), run.k_sequence)
        except Exception as exc:
            self._db.log("error", "Analyze failed", {"graph": config.graph_path, "error": str(exc)})
            raise
        payload = {
            "graph": graph.to_json(),
            "sequence": sequence.to_json(),
            "labelling": run.labelling.to_json(),
            "seeds": list(run.seeds),
            "attempt": run.attempt,
            "realizations": len(run.realizations),
            "partitions": [part.to_json() for part in run.partitions],
            "brute_force": oracle,
            "group": report.to_json(),
        }
        self._db.record_run(
            graph_digest(graph),
            config.graph_path or "",
            config.seed,
            group.order,
            run.k_sequence,
            payload,
        )
        self._db.log("info", "Analyze finished", {"order": group.order, "k_sequence": run.k_sequence})
        return payload

    def realize(self, config: RunConfig) -> dict:
        graph, sequence = self.prepare(config)
        run = self.genericity_protocol(graph, sequence, config.seed, config.range, config.attempts)
        self._db.log("info", "Realizations exported", {"count": len(run.realizations)})
        return realization_set_to_json(run.realizations, config.precision)

    def sample_real(self, config: RunConfig) -> SampleReport:
        graph, sequence = self.prepare(config)
        run = self.genericity_protocol(graph, sequence, config.seed, config.range, config.attempts)
        group, _ = self.compute_group(run, config)
        spectrum = real_count_spectrum(group)
        report = sample_real_counts(
            sequence,
            spectrum,
            trials=config.trials,
            seed=config.seed,
            tolerance=config.tolerance,
            workers=config.workers,
        )
        for skipped in report.skipped:
            self._db.log("info", "Degenerate sampler trial skipped", skipped)
        if report.violations:
            self._db.log("error", "Real counts outside the predicted spectrum", {"violations": report.violations})
        self._db.record_sample(graph_digest(graph), report)
        return report

    def mqdeg(self, values: Sequence[str]) -> DegreeReport:
        try:
            parsed = [Fraction(value) for value in values]
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"Cannot read rationals from {list(values)}: {exc}") from exc
        if not parsed or any(value == 0 for value in parsed):
            raise ValueError("mqdeg needs one or more nonzero rationals")
        report = degree_report(parsed)
        self._db.log("info", "Multiquadratic degree computed", {"values": list(values), "degree": report.degree})
        return report
