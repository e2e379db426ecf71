"""
Membership tests: does a stick triple, read as a given element triple,
give a triangle, and is that triangle acute?

Every test has a vectorised form taking three arrays (the Monte Carlo and
plotting paths) and a scalar form taking a StickTriple or any three numbers.
All inequalities are strict; boundary triples evaluate False.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config.config import BISECTOR_MAX_ITER, BISECTOR_TOLERANCE, CLASSIFY_TOLERANCE
from src.elements import TriangleSides, acute_mask, vertex_coordinates
from src.exceptions import ConfigError, ModelDomainError
from src.solvers import solve_bisector_batch

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


class Interpretation(Enum):
    SIDES = 'sides'
    MEDIANS = 'medians'
    ALTITUDES = 'altitudes'
    EXRADII = 'exradii'
    INCENTER_DISTANCES = 'incenter-distances'
    CEVIAN_HWM = 'cevian-hwm'
    TANGENT_CIRCLES = 'tangent-circles'
    ANGLE_BISECTORS = 'angle-bisectors'
    CIRCUMCENTER_DISTANCES = 'circumcenter-distances'


class Predicate(Enum):
    EXISTS = 'exists'
    ACUTE = 'acute'


# Row labels of the published summary table.
CASE_LABELS: Dict[Interpretation, str] = {
    Interpretation.SIDES: 'classical case',
    Interpretation.MEDIANS: 'medians',
    Interpretation.ALTITUDES: 'altitudes',
    Interpretation.EXRADII: 'excircles radii',
    Interpretation.INCENTER_DISTANCES: 'IA, IB, IC',
    Interpretation.CEVIAN_HWM: 'h_a, w_a and m_a',
    Interpretation.TANGENT_CIRCLES: 'r,s,t',
    Interpretation.ANGLE_BISECTORS: 'angle bisector',
    Interpretation.CIRCUMCENTER_DISTANCES: 'd(O,AB), ...',
}


@dataclass(frozen=True)
class EventDescriptor:
    interpretation: Interpretation
    predicate: Predicate

    @property
    def key(self) -> str:
        return f"{self.interpretation.value}:{self.predicate.value}"

    @property
    def label(self) -> str:
        return CASE_LABELS[self.interpretation]

    @property
    def solver_backed(self) -> bool:
        return self in SOLVER_BACKED

    @property
    def certain(self) -> bool:
        return self in CERTAIN_EVENTS

    @classmethod
    def parse(cls, text: str) -> List['EventDescriptor']:
        """
        Parse 'sides', 'sides:acute' or 'all' into event descriptors.

        Args:
            text: Interpretation name, optionally followed by ':exists' or ':acute'

        Returns:
            List of matching descriptors
        """
        text = text.strip().lower()
        if text == 'all':
            return all_events()
        name, _, predicate = text.partition(':')
        try:
            interpretation = Interpretation(name)
            predicates = [Predicate(predicate)] if predicate else list(Predicate)
        except ValueError as e:
            raise ConfigError(f"unknown event '{text}'") from e
        return [cls(interpretation, p) for p in predicates]

    def __str__(self) -> str:
        return self.key


def all_events() -> List[EventDescriptor]:
    return [EventDescriptor(i, p) for i in Interpretation for p in Predicate]


def parse_events(items: Iterable[str]) -> List[EventDescriptor]:
    events: List[EventDescriptor] = []
    for item in items:
        for event in EventDescriptor.parse(item):
            if event not in events:
                events.append(event)
    return events


CERTAIN_EVENTS = frozenset({
    EventDescriptor(Interpretation.EXRADII, Predicate.EXISTS),
    EventDescriptor(Interpretation.INCENTER_DISTANCES, Predicate.EXISTS),
    EventDescriptor(Interpretation.CEVIAN_HWM, Predicate.EXISTS),
    EventDescriptor(Interpretation.ANGLE_BISECTORS, Predicate.EXISTS),
    EventDescriptor(Interpretation.CIRCUMCENTER_DISTANCES, Predicate.EXISTS),
    EventDescriptor(Interpretation.CIRCUMCENTER_DISTANCES, Predicate.ACUTE),
})

SOLVER_BACKED = frozenset({
    EventDescriptor(Interpretation.ALTITUDES, Predicate.ACUTE),
    EventDescriptor(Interpretation.ANGLE_BISECTORS, Predicate.ACUTE),
})


# --- vectorised predicates -------------------------------------------------

Arrays = Tuple[np.ndarray, np.ndarray, np.ndarray]


def _arrays(a, b, c) -> Arrays:
    return (np.asarray(a, dtype=float), np.asarray(b, dtype=float), np.asarray(c, dtype=float))


def _sorted_desc(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> Arrays:
    stacked = np.sort(np.stack([a, b, c]), axis=0)
    return stacked[2], stacked[1], stacked[0]


def _certain(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.ones(np.broadcast(a, b, c).shape, dtype=bool)


def sides_exists_mask(a, b, c) -> np.ndarray:
    a, b, c = _arrays(a, b, c)
    return a + b + c > 2.0 * np.maximum(np.maximum(a, b), c)


def sides_acute_mask(a, b, c) -> np.ndarray:
    a, b, c = _arrays(a, b, c)
    a2, b2, c2 = a * a, b * b, c * c
    return (a2 + b2 > c2) & (b2 + c2 > a2) & (a2 + c2 > b2)


def medians_exists_mask(a, b, c) -> np.ndarray:
    return sides_exists_mask(a, b, c)


def medians_acute_mask(a, b, c) -> np.ndarray:
    a, b, c = _arrays(a, b, c)
    a2, b2, c2 = a * a, b * b, c * c
    smallest = np.minimum(np.minimum(a2, b2), c2)
    return a2 + b2 + c2 < 6.0 * smallest


def altitudes_exists_mask(a, b, c) -> np.ndarray:
    """Reciprocal triangle inequality, multiplied through by abc."""
    a, b, c = _arrays(a, b, c)
    return sides_exists_mask(b * c, a * c, a * b)


def altitudes_acute_mask(a, b, c, tolerance: float = CLASSIFY_TOLERANCE) -> np.ndarray:
    """Classify the reconstruction, whose sides are proportional to (bc, ac, ab)."""
    a, b, c = _arrays(a, b, c)
    p, q, r = b * c, a * c, a * b
    return sides_exists_mask(p, q, r) & acute_mask(p, q, r, tolerance)


def exradii_acute_mask(a, b, c) -> np.ndarray:
    a, b, c = _arrays(a, b, c)
    largest = np.maximum(np.maximum(a, b), c)
    return a * b + b * c + c * a > largest * largest


def incenter_acute_mask(a, b, c) -> np.ndarray:
    a, b, c = _arrays(a, b, c)
    a2, b2, c2 = a * a, b * b, c * c
    return ((SQRT2 * a2 * b * c + a2 * (b2 + c2) - b2 * c2 > 0.0)
            & (SQRT2 * b2 * a * c + b2 * (a2 + c2) - a2 * c2 > 0.0)
            & (SQRT2 * c2 * a * b + c2 * (a2 + b2) - a2 * b2 > 0.0))


def cevian_acute_mask(a, b, c) -> np.ndarray:
    """
    Sorted h < w < m gives an acute triangle iff 2h^2 > w^2 and
    h sqrt(w^4 - 3h^2(w^2 - h^2)) / (2h^2 - w^2) < m < h w^2 / (2h^2 - w^2).
    """
    a, b, c = _arrays(a, b, c)
    m, w, h = _sorted_desc(a, b, c)
    h2, w2 = h * h, w * w
    denominator = 2.0 * h2 - w2
    open_window = (h < w) & (w < m) & (denominator > 0.0)
    safe = np.where(open_window, denominator, 1.0)
    radicand = np.maximum(w2 * w2 - 3.0 * h2 * (w2 - h2), 0.0)
    lower = h * np.sqrt(radicand) / safe
    upper = h * w2 / safe
    return open_window & (lower < m) & (m < upper)


def tangent_circles_exists_mask(a, b, c) -> np.ndarray:
    a, b, c = _arrays(a, b, c)
    largest = np.maximum(np.maximum(a, b), c)
    return largest * largest * largest < 4.0 * a * b * c


def tangent_circles_acute_mask(a, b, c) -> np.ndarray:
    """
    With r >= s >= t the widest corner of the outer triangle holds the
    smallest circle; its angle is theta + (pi/2 - 2 chi_r) + (pi/2 - 2 chi_s)
    where tan(theta/2) = sqrt(rs / (t p)), p = r + s + t, and
    tan(chi_x) = sqrt(t / x). The angle is below pi/2 iff
    N (sqrt(tp) - sqrt(rs)) > D (sqrt(tp) + sqrt(rs)) with
    N = sqrt(t)(sqrt(r) + sqrt(s)) and D = sqrt(rs) - t.
    """
    a, b, c = _arrays(a, b, c)
    r, s, t = _sorted_desc(a, b, c)
    root_rs = np.sqrt(r * s)
    root_tp = np.sqrt(t * (r + s + t))
    numerator = np.sqrt(t) * (np.sqrt(r) + np.sqrt(s))
    denominator = root_rs - t
    widest_acute = numerator * (root_tp - root_rs) > denominator * (root_tp + root_rs)
    return tangent_circles_exists_mask(a, b, c) & widest_acute


def angle_bisectors_acute_mask(a, b, c, tol: float = BISECTOR_TOLERANCE,
                               max_iter: int = BISECTOR_MAX_ITER,
                               tolerance: float = CLASSIFY_TOLERANCE) -> Tuple[np.ndarray, np.ndarray]:
    """
    Solve for the triangle with these bisectors and classify it.

    Returns:
        Tuple (acute mask, solver failure mask)
    """
    a, b, c = _arrays(a, b, c)
    shape = np.broadcast(a, b, c).shape
    targets = np.stack(np.broadcast_arrays(a, b, c), axis=-1).reshape(-1, 3)
    acute = np.zeros(targets.shape[0], dtype=bool)
    failed = np.zeros(targets.shape[0], dtype=bool)
    positive = np.all(targets > 0.0, axis=-1)
    if positive.any():
        sides, _, converged, _ = solve_bisector_batch(targets[positive], tol, max_iter)
        idx = np.flatnonzero(positive)
        acute[idx] = converged & acute_mask(sides[:, 0], sides[:, 1], sides[:, 2], tolerance)
        failed[idx] = ~converged
        if failed.any():
            logger.info("Bisector solver failed on %d of %d triples", int(failed.sum()), idx.size)
    return acute.reshape(shape), failed.reshape(shape)


MaskFunction = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

MASKS: Dict[EventDescriptor, MaskFunction] = {
    EventDescriptor(Interpretation.SIDES, Predicate.EXISTS): sides_exists_mask,
    EventDescriptor(Interpretation.SIDES, Predicate.ACUTE): sides_acute_mask,
    EventDescriptor(Interpretation.MEDIANS, Predicate.EXISTS): medians_exists_mask,
    EventDescriptor(Interpretation.MEDIANS, Predicate.ACUTE): medians_acute_mask,
    EventDescriptor(Interpretation.ALTITUDES, Predicate.EXISTS): altitudes_exists_mask,
    EventDescriptor(Interpretation.ALTITUDES, Predicate.ACUTE): altitudes_acute_mask,
    EventDescriptor(Interpretation.EXRADII, Predicate.EXISTS): _certain,
    EventDescriptor(Interpretation.EXRADII, Predicate.ACUTE): exradii_acute_mask,
    EventDescriptor(Interpretation.INCENTER_DISTANCES, Predicate.EXISTS): _certain,
    EventDescriptor(Interpretation.INCENTER_DISTANCES, Predicate.ACUTE): incenter_acute_mask,
    EventDescriptor(Interpretation.CEVIAN_HWM, Predicate.EXISTS): _certain,
    EventDescriptor(Interpretation.CEVIAN_HWM, Predicate.ACUTE): cevian_acute_mask,
    EventDescriptor(Interpretation.TANGENT_CIRCLES, Predicate.EXISTS): tangent_circles_exists_mask,
    EventDescriptor(Interpretation.TANGENT_CIRCLES, Predicate.ACUTE): tangent_circles_acute_mask,
    EventDescriptor(Interpretation.ANGLE_BISECTORS, Predicate.EXISTS): _certain,
    EventDescriptor(Interpretation.CIRCUMCENTER_DISTANCES, Predicate.EXISTS): _certain,
    EventDescriptor(Interpretation.CIRCUMCENTER_DISTANCES, Predicate.ACUTE): _certain,
}


def evaluate(event: EventDescriptor, a, b, c) -> Tuple[np.ndarray, np.ndarray]:
    """
    Evaluate an event on arrays of stick parts.

    Args:
        event: Event to test
        a, b, c: Arrays of the three parts

    Returns:
        Tuple (event mask, solver failure mask)
    """
    if event == EventDescriptor(Interpretation.ANGLE_BISECTORS, Predicate.ACUTE):
        return angle_bisectors_acute_mask(a, b, c)
    mask = MASKS[event](a, b, c)
    return mask, np.zeros_like(mask, dtype=bool)


# --- scalar forms ----------------------------------------------------------

def _scalar(mask_function: MaskFunction, t: Sequence[float]) -> bool:
    a, b, c = (float(x) for x in t)
    return bool(mask_function(np.array([a]), np.array([b]), np.array([c]))[0])


def sides_exists(t) -> bool:
    return _scalar(sides_exists_mask, t)


def sides_acute(t) -> bool:
    return _scalar(sides_acute_mask, t)


def medians_exists(t) -> bool:
    return _scalar(medians_exists_mask, t)


def medians_acute(t) -> bool:
    return _scalar(medians_acute_mask, t)


def altitudes_exists(t) -> bool:
    return _scalar(altitudes_exists_mask, t)


def altitudes_acute(t) -> bool:
    return _scalar(altitudes_acute_mask, t)


def exradii_acute(t) -> bool:
    return _scalar(exradii_acute_mask, t)


def cevian_hwm_acute(t) -> bool:
    return _scalar(cevian_acute_mask, t)


def tangent_circles_exists(t) -> bool:
    return _scalar(tangent_circles_exists_mask, t)


def tangent_circles_acute(t) -> bool:
    return _scalar(tangent_circles_acute_mask, t)


def incenter_acute(t) -> bool:
    return _scalar(incenter_acute_mask, t)


def angle_bisectors_acute(t) -> bool:
    a, b, c = (float(x) for x in t)
    acute, _ = angle_bisectors_acute_mask(np.array([a]), np.array([b]), np.array([c]))
    return bool(acute[0])


def holds(event: EventDescriptor, t) -> bool:
    a, b, c = (float(x) for x in t)
    mask, _ = evaluate(event, np.array([a]), np.array([b]), np.array([c]))
    return bool(mask[0])


# --- oracles and the general triangle ----------------------------------------

def tangent_circles_outer_triangle(r: float, s: float, t: float) -> Optional[TriangleSides]:
    """
    Triangle whose sides are the external common tangents of three mutually
    tangent circles, each side touching two circles and leaving all three on
    its inner side.

    Returns:
        TriangleSides, or None when the tangents do not enclose the circles
    """
    radii = (r, s, t)
    centers = [np.array([0.0, 0.0]), np.array([r + s, 0.0])]
    x = ((r + t) ** 2 - (s + t) ** 2 + (r + s) ** 2) / (2.0 * (r + s))
    centers.append(np.array([x, math.sqrt(max((r + t) ** 2 - x * x, 0.0))]))

    lines = []
    for i, j, k in ((1, 2, 0), (0, 2, 1), (0, 1, 2)):
        d = centers[j] - centers[i]
        e = d / np.linalg.norm(d)
        perp = np.array([-e[1], e[0]])
        along = (radii[i] - radii[j]) / (radii[i] + radii[j])
        across = math.sqrt(max(1.0 - along * along, 0.0))
        candidates = []
        for sign in (1.0, -1.0):
            normal = along * e + sign * across * perp
            offset = normal @ centers[i] + radii[i]
            candidates.append((offset - normal @ centers[k], normal, offset))
        # the far tangent leaves the third center deepest inside
        depth, normal, offset = max(candidates, key=lambda c: c[0])
        if depth < radii[k]:
            return None
        lines.append((normal, offset))

    n0, n1, n2 = (line[0] for line in lines)
    weights = (n1[0] * n2[1] - n1[1] * n2[0],
               n2[0] * n0[1] - n2[1] * n0[0],
               n0[0] * n1[1] - n0[1] * n1[0])
    if not (all(wt > 0.0 for wt in weights) or all(wt < 0.0 for wt in weights)):
        return None

    def meet(p: int, q: int) -> np.ndarray:
        matrix = np.array([lines[p][0], lines[q][0]])
        return np.linalg.solve(matrix, np.array([lines[p][1], lines[q][1]]))

    # vertex opposite side p is where the other two tangents meet
    vertices = [meet(1, 2), meet(0, 2), meet(0, 1)]
    try:
        return TriangleSides(float(np.linalg.norm(vertices[1] - vertices[2])),
                             float(np.linalg.norm(vertices[0] - vertices[2])),
                             float(np.linalg.norm(vertices[0] - vertices[1])))
    except ValueError:
        return None


def general_triangle_distances(T: TriangleSides, x: np.ndarray, y: np.ndarray) -> Arrays:
    """
    Distances from points to the sides BC, CA, AB of T embedded with
    B=(0,0) and C=(a,0).
    """
    (ax, ay), _, (cx, _) = vertex_coordinates(T)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    to_bc = y
    to_ca = np.abs((cx - ax) * (y - ay) - (0.0 - ay) * (x - ax)) / T.b
    to_ab = np.abs(ax * y - ay * x) / T.c
    return to_bc, to_ca, to_ab


def general_triangle_sides_exists(p: Tuple[float, float], T: TriangleSides) -> bool:
    """
    Whether the distances from an interior point p to the sides of T form a
    triangle.

    Raises:
        ModelDomainError: when p is not strictly inside T
    """
    (ax, ay), _, (cx, _) = vertex_coordinates(T)
    x, y = p
    inside = y > 0.0 and (ax * y - ay * x) < 0.0 and ((cx - ax) * (y - ay) + ay * (x - ax)) < 0.0
    if not inside:
        raise ModelDomainError(f"point {p} is not inside triangle {T.as_tuple()}")
    d = general_triangle_distances(T, np.array([x]), np.array([y]))
    return _scalar(sides_exists_mask, [float(v[0]) for v in d])


def general_triangle_acute(p: Tuple[float, float], T: TriangleSides) -> bool:
    d = general_triangle_distances(T, np.array([p[0]]), np.array([p[1]]))
    return _scalar(sides_acute_mask, [float(v[0]) for v in d])
