"""
Forward formulas: every element triple of a triangle given by its sides.

Vertex A faces side a, B faces b and C faces c throughout.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple, Union

import numpy as np

from config.config import CLASSIFY_TOLERANCE
from src.exceptions import ClassificationError, NoTriangleError

Triple = Tuple[float, float, float]
Point = Tuple[float, float]

_VERTEX_INDEX: Dict[str, int] = {'A': 0, 'B': 1, 'C': 2}


class TriangleKind(Enum):
    ACUTE = 'acute'
    RIGHT = 'right'
    OBTUSE = 'obtuse'


@dataclass(frozen=True)
class TriangleClass:
    kind: TriangleKind
    tolerance: float

    @property
    def is_acute(self) -> bool:
        return self.kind is TriangleKind.ACUTE


@dataclass(frozen=True)
class TriangleSides:
    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if not (a > 0.0 and b > 0.0 and c > 0.0):
            raise NoTriangleError(f"sides must be positive, got {(a, b, c)}")
        if not a + b + c > 2.0 * max(a, b, c):
            raise NoTriangleError(f"sides {(a, b, c)} violate the triangle inequality")

    def as_tuple(self) -> Triple:
        return (self.a, self.b, self.c)

    def scaled(self, k: float) -> 'TriangleSides':
        return TriangleSides(k * self.a, k * self.b, k * self.c)

    @property
    def semiperimeter(self) -> float:
        return (self.a + self.b + self.c) / 2.0


def area(t: TriangleSides) -> float:
    """Heron's formula in the cancellation-free ordering of its factors."""
    a, b, c = sorted(t.as_tuple(), reverse=True)
    product = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.25 * math.sqrt(max(product, 0.0))


def angles(t: TriangleSides) -> Triple:
    """Angles (A, B, C) in radians from tan A = 4S / (b^2 + c^2 - a^2)."""
    a, b, c = t.as_tuple()
    s4 = 4.0 * area(t)
    return (math.atan2(s4, b * b + c * c - a * a),
            math.atan2(s4, a * a + c * c - b * b),
            math.atan2(s4, a * a + b * b - c * c))


def circumradius(t: TriangleSides) -> float:
    return t.a * t.b * t.c / (4.0 * area(t))


def inradius(t: TriangleSides) -> float:
    return area(t) / t.semiperimeter


def medians(t: TriangleSides) -> Triple:
    """
    Median lengths from m_a^2 = (2(b^2 + c^2) - a^2) / 4.

    Args:
        t: Triangle sides

    Returns:
        Tuple (m_a, m_b, m_c)
    """
    a, b, c = t.as_tuple()
    return (0.5 * math.sqrt(2.0 * (b * b + c * c) - a * a),
            0.5 * math.sqrt(2.0 * (a * a + c * c) - b * b),
            0.5 * math.sqrt(2.0 * (a * a + b * b) - c * c))


def altitudes(t: TriangleSides) -> Triple:
    s2 = 2.0 * area(t)
    return (s2 / t.a, s2 / t.b, s2 / t.c)


def exradii(t: TriangleSides) -> Triple:
    """Excircle radii r_a = 2S / (b + c - a)."""
    a, b, c = t.as_tuple()
    s2 = 2.0 * area(t)
    return (s2 / (b + c - a), s2 / (a + c - b), s2 / (a + b - c))


def _cosines(t: TriangleSides) -> Triple:
    a, b, c = t.as_tuple()
    return ((b * b + c * c - a * a) / (2.0 * b * c),
            (a * a + c * c - b * b) / (2.0 * a * c),
            (a * a + b * b - c * c) / (2.0 * a * b))


def circumcenter_distances(t: TriangleSides, signed: bool = False,
                           require_acute: bool = False) -> Triple:
    """
    Distances from the circumcenter to the sides, (R cos A, R cos B, R cos C).

    Args:
        t: Triangle sides
        signed: Keep the negative sign for the side facing an obtuse angle
        require_acute: Raise ClassificationError unless the triangle is acute

    Returns:
        Tuple of three distances
    """
    if require_acute and not classify(t).is_acute:
        raise ClassificationError(f"triangle {t.as_tuple()} is not acute")
    radius = circumradius(t)
    values = tuple(radius * cosine for cosine in _cosines(t))
    if not signed:
        values = tuple(abs(v) for v in values)
    return values  # type: ignore[return-value]


def orthocenter_distances(t: TriangleSides, signed: bool = False,
                          require_acute: bool = False) -> Triple:
    """Vertex-to-orthocenter distances HA = 2R cos A."""
    u, v, w = circumcenter_distances(t, signed=signed, require_acute=require_acute)
    return (2.0 * u, 2.0 * v, 2.0 * w)


def incenter_vertex_distances(t: TriangleSides) -> Triple:
    """AI = sqrt(r^2 + (s - a)^2), the tangent length from A being s - a."""
    r = inradius(t)
    s = t.semiperimeter
    return tuple(math.hypot(r, s - side) for side in t.as_tuple())  # type: ignore[return-value]


def angle_bisectors(t: TriangleSides) -> Triple:
    """Internal bisectors w_a = sqrt(bc((b + c)^2 - a^2)) / (b + c)."""
    a, b, c = t.as_tuple()
    return (math.sqrt(b * c * (b + c - a) * (b + c + a)) / (b + c),
            math.sqrt(a * c * (a + c - b) * (a + c + b)) / (a + c),
            math.sqrt(a * b * (a + b - c) * (a + b + c)) / (a + b))


def vertex_cevians(t: TriangleSides, vertex: Union[str, int] = 'A') -> Triple:
    """
    Altitude, angle bisector and median issued from one vertex.

    Args:
        t: Triangle sides
        vertex: 'A', 'B', 'C' or index 0..2

    Returns:
        Tuple (h, w, m) with h <= w <= m
    """
    index = _VERTEX_INDEX[vertex.upper()] if isinstance(vertex, str) else int(vertex)
    return (altitudes(t)[index], angle_bisectors(t)[index], medians(t)[index])


def classify(t: TriangleSides, tolerance: float = CLASSIFY_TOLERANCE) -> TriangleClass:
    """
    Acute, right or obtuse by the smallest of b^2+c^2-a^2 and its rotations.

    Args:
        t: Triangle sides
        tolerance: Band around zero, relative to the largest side squared

    Returns:
        TriangleClass
    """
    a2, b2, c2 = t.a * t.a, t.b * t.b, t.c * t.c
    smallest = min(b2 + c2 - a2, a2 + c2 - b2, a2 + b2 - c2)
    band = tolerance * max(a2, b2, c2)
    if smallest > band:
        kind = TriangleKind.ACUTE
    elif smallest >= -band:
        kind = TriangleKind.RIGHT
    else:
        kind = TriangleKind.OBTUSE
    return TriangleClass(kind, tolerance)


def acute_mask(a: np.ndarray, b: np.ndarray, c: np.ndarray,
               tolerance: float = CLASSIFY_TOLERANCE) -> np.ndarray:
    """Vectorised classify(...).is_acute for arrays of valid sides."""
    a2, b2, c2 = a * a, b * b, c * c
    smallest = np.minimum(np.minimum(b2 + c2 - a2, a2 + c2 - b2), a2 + b2 - c2)
    return smallest > tolerance * np.maximum(np.maximum(a2, b2), c2)


def vertex_coordinates(t: TriangleSides) -> Tuple[Point, Point, Point]:
    """Embedding with B=(0,0), C=(a,0) and A above the x-axis."""
    a, b, c = t.as_tuple()
    x = (a * a + c * c - b * b) / (2.0 * a)
    y = 2.0 * area(t) / a
    return (x, y), (0.0, 0.0), (a, 0.0)
