"""Floating-point sampling of real realization counts.

Each trial draws real edge lengths and places the vertices step by step for
all sign vectors at once. A sign vector survives while every step has a
positive discriminant, so the number of survivors at the end is the number of
real realizations. Trials with a discriminant near zero are skipped.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from graph_core.graph import HennebergSequence, normalize_edge

LENGTH_RANGE = (0.2, 2.0)


@dataclass
class TrialResult:
    index: int
    count: Optional[int]
    step: Optional[int] = None
    value: Optional[float] = None


@dataclass
class SampleReport:
    trials: int
    histogram: Dict[int, int]
    predicted_spectrum: List[int]
    violations: List[dict] = field(default_factory=list)
    skipped: List[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "histogram": {str(count): n for count, n in sorted(self.histogram.items())},
            "predicted_spectrum": list(self.predicted_spectrum),
            "violations": self.violations,
            "skipped": self.skipped,
        }


def random_squared_lengths(
    sequence: HennebergSequence, rng: np.random.Generator
) -> Dict[Tuple[int, int], float]:
    """Squares of uniform edge lengths; the base edge has length 1."""

    edges = sorted({normalize_edge(a, new) for i, j, new in sequence for a in (i, j)})
    lengths = rng.uniform(*LENGTH_RANGE, size=len(edges))
    labels = {edge: float(length * length) for edge, length in zip(edges, lengths)}
    labels[normalize_edge(*sequence.base_edge)] = 1.0
    return labels


def count_real_realizations(
    sequence: HennebergSequence,
    labels: Dict[Tuple[int, int], float],
    tolerance: float = 1e-9,
) -> Tuple[Optional[int], Optional[int], Optional[float]]:
    """``(count, None, None)``, or ``(None, step, value)`` for a degenerate labelling."""

    v1, v2 = sequence.base_edge
    xs: Dict[int, np.ndarray] = {v1: np.zeros(1), v2: np.ones(1)}
    ys: Dict[int, np.ndarray] = {v1: np.zeros(1), v2: np.zeros(1)}
    for step, (i, j, new) in enumerate(sequence, start=1):
        dx = xs[j] - xs[i]
        dy = ys[j] - ys[i]
        length_sq = dx * dx + dy * dy
        if length_sq.size and np.min(length_sq) < tolerance:
            return None, step, float(np.min(length_sq))
        lam_in = labels[normalize_edge(i, new)]
        lam_jn = labels[normalize_edge(j, new)]
        alpha = (lam_in + length_sq - lam_jn) / (2 * length_sq)
        beta_sq = lam_in / length_sq - alpha * alpha
        near = np.abs(beta_sq) < tolerance
        if np.any(near):
            return None, step, float(beta_sq[near][0])
        keep = beta_sq > 0
        beta = np.sqrt(beta_sq[keep])
        dx, dy, alpha = dx[keep], dy[keep], alpha[keep]
        for vertex in list(xs):
            xs[vertex] = np.concatenate([xs[vertex][keep]] * 2)
            ys[vertex] = np.concatenate([ys[vertex][keep]] * 2)
        foot_x = xs[i][: beta.size] + alpha * dx
        foot_y = ys[i][: beta.size] + alpha * dy
        xs[new] = np.concatenate([foot_x - beta * dy, foot_x + beta * dy])
        ys[new] = np.concatenate([foot_y + beta * dx, foot_y - beta * dx])
    return int(xs[v1].size), None, None


def _run_trials(args: Tuple[HennebergSequence, Sequence[Tuple[int, np.random.SeedSequence]], float]) -> List[TrialResult]:
    sequence, seeds, tolerance = args
    results = []
    for index, seed_seq in seeds:
        rng = np.random.default_rng(seed_seq)
        labels = random_squared_lengths(sequence, rng)
        count, step, value = count_real_realizations(sequence, labels, tolerance)
        results.append(TrialResult(index, count, step, value))
    return results


def sample_real_counts(
    sequence: HennebergSequence,
    spectrum: Sequence[int],
    trials: int = 100,
    seed: int = 1,
    tolerance: float = 1e-9,
    workers: int = 1,
) -> SampleReport:
    """Count real realizations for ``trials`` random real labellings.

    Every trial has its own random stream spawned from ``seed``, so the
    report does not depend on ``workers``.
    """

    children = list(enumerate(np.random.SeedSequence(seed).spawn(trials)))
    if workers > 1:
        size = max(1, -(-trials // workers))
        chunks = [(sequence, children[start:start + size], tolerance) for start in range(0, trials, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [result for chunk in pool.map(_run_trials, chunks) for result in chunk]
    else:
        results = _run_trials((sequence, children, tolerance))
    results.sort(key=lambda result: result.index)

    allowed = set(spectrum)
    histogram: Counter = Counter()
    report = SampleReport(trials=trials, histogram={}, predicted_spectrum=sorted(allowed))
    for result in results:
        if result.count is None:
            report.skipped.append({"trial": result.index, "step": result.step, "value": result.value})
            continue
        histogram[result.count] += 1
        if result.count not in allowed:
            report.violations.append({"trial": result.index, "count": result.count})
    report.histogram = dict(sorted(histogram.items()))
    return report
