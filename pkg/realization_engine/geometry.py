"""Exact plane geometry over a quadratic tower."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from exact_tower.tower import Tower, TowerElement, ensure_tower_element

Point = Tuple[TowerElement, TowerElement]
Label = Union[TowerElement, int, Fraction]


class RealizationError(RuntimeError):
    """Base class for realization failures."""


class GenericityFailure(RealizationError):
    """Raised when the labelling shows a coincidence a generic labelling cannot have."""


class CoincidentBasePointsError(GenericityFailure):
    """Raised when the two anchor vertices of a 1-step coincide."""


def point(tower: Tower, x: Label, y: Label) -> Point:
    return ensure_tower_element(tower, x), ensure_tower_element(tower, y)


def squared_distance(p: Point, q: Point) -> TowerElement:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def signed_area(p1: Point, p2: Point, p3: Point) -> TowerElement:
    """Signed area ``((x2 - x3)(y1 - y3) - (x1 - x3)(y2 - y3)) / 2``.

    The formula is used as written; it gives -1/2 for (0,0), (1,0), (0,1).
    """

    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    return ((x2 - x3) * (y1 - y3) - (x1 - x3) * (y2 - y3)) * Fraction(1, 2)


def cayley_menger_determinant(a: TowerElement, b: TowerElement, c: TowerElement) -> TowerElement:
    """det [[0,a,b,1],[a,0,c,1],[b,c,0,1],[1,1,1,0]] for squared side lengths a, b, c.

    Equals -16 times the squared area of the triangle.
    """

    return a * a + b * b + c * c - (a * b + b * c + c * a) * 2


def cayley_menger_sq_area(l12: Label, l13: Label, l23: Label, tower: Optional[Tower] = None) -> TowerElement:
    if tower is None:
        tower = next(v.tower for v in (l12, l13, l23) if isinstance(v, TowerElement))
    a, b, c = (ensure_tower_element(tower, v) for v in (l12, l13, l23))
    return cayley_menger_determinant(a, b, c) * Fraction(-1, 16)


@dataclass(frozen=True)
class Placement:
    """Result of a single 1-step placement."""

    point: Point
    area: TowerElement
    radicand: TowerElement
    root: Optional[int]


def place_vertex(
    p_i: Point,
    p_j: Point,
    lam_in: Label,
    lam_jn: Label,
    branch: int,
    tower: Tower,
) -> Placement:
    """Place a new vertex at squared distances ``lam_in`` from p_i and ``lam_jn`` from p_j.

    With d = p_j - p_i and L = |d|^2 the new point is
    p_i + alpha*d + branch*beta*(-d_y, d_x) where
    alpha = (lam_in + L - lam_jn) / (2L) and beta**2 = lam_in/L - alpha**2.
    The root beta is shared by every placement with the same exact beta**2.
    """

    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    lam_in = ensure_tower_element(tower, lam_in)
    lam_jn = ensure_tower_element(tower, lam_jn)
    dx = p_j[0] - p_i[0]
    dy = p_j[1] - p_i[1]
    length_sq = dx * dx + dy * dy
    if length_sq.is_zero():
        raise CoincidentBasePointsError("Anchor vertices coincide (squared distance 0)")
    inverse_length = length_sq.inverse()
    alpha = (lam_in + length_sq - lam_jn) * inverse_length * Fraction(1, 2)
    radicand = lam_in * inverse_length - alpha * alpha
    foot = (p_i[0] + alpha * dx, p_i[1] + alpha * dy)
    if radicand.is_zero():
        return Placement(foot, tower.zero(), radicand, None)
    handle = tower.cached_sqrt(radicand)
    beta = tower.root(handle) * branch
    new_point = (foot[0] - beta * dy, foot[1] + beta * dx)
    return Placement(new_point, signed_area(p_i, p_j, new_point), radicand, handle)
