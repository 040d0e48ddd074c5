"""JSON dumps of realization sets."""

from __future__ import annotations

from fractions import Fraction

from realization_engine.enumeration import RealizationSet


def _digits(precision: Fraction) -> int:
    digits = 1
    scale = Fraction(1, 10)
    while scale > precision and digits < 16:
        scale /= 10
        digits += 1
    return digits + 1


def realization_set_to_json(rs: RealizationSet, precision: Fraction = Fraction(1, 10**12)) -> dict:
    """Numeric coordinates and step areas of every realization, plus the exact tower."""

    precision = Fraction(precision)
    digits = _digits(precision)
    realizations = []
    for realization, coords in zip(rs.realizations, rs.numeric_coords(precision)):
        realizations.append(
            {
                "index": realization.mask,
                "signs": list(realization.signs),
                "coords": {
                    str(vertex): [x.mid_str(digits), y.mid_str(digits)]
                    for vertex, (x, y) in coords.items()
                },
                "step_areas": {
                    str(l): area.numeric(precision).mid_str(digits)
                    for l, area in sorted(realization.step_area.items())
                },
                "step_roots": {str(l): root for l, root in sorted(realization.step_root.items())},
            }
        )
    return {
        "graph": rs.graph.to_json(),
        "sequence": rs.sequence.to_json(),
        "labelling": rs.labelling.to_json(),
        "precision": str(precision),
        "tower": [radicand.to_json() for radicand in rs.tower.radicands()],
        "realizations": realizations,
    }
