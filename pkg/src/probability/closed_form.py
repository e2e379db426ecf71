"""
Exact probabilities, evaluated in double precision.
"""
import math
from typing import Callable, Dict

from src.elements import TriangleSides
from src.exceptions import NoClosedFormError
from src.predicates import EventDescriptor, Interpretation, Predicate
from src.probability.models import Method, ProbabilityEstimate

SQRT5 = math.sqrt(5.0)
SQRT7 = math.sqrt(7.0)
SQRT14 = math.sqrt(14.0)


def _event(interpretation: Interpretation, predicate: Predicate) -> EventDescriptor:
    return EventDescriptor(interpretation, predicate)


CLOSED_FORMS: Dict[EventDescriptor, Callable[[], float]] = {
    _event(Interpretation.SIDES, Predicate.EXISTS): lambda: 0.25,
    _event(Interpretation.SIDES, Predicate.ACUTE): lambda: 3.0 * math.log(2.0) - 2.0,
    _event(Interpretation.MEDIANS, Predicate.EXISTS): lambda: 0.25,
    _event(Interpretation.MEDIANS, Predicate.ACUTE): lambda: 1.0 / 3.0 - 5.0 / 9.0 * math.log(8.0 / 5.0),
    _event(Interpretation.ALTITUDES, Predicate.EXISTS):
        lambda: 4.0 / 25.0 * (3.0 * SQRT5 * math.log((3.0 + SQRT5) / 2.0) - 5.0),
    _event(Interpretation.EXRADII, Predicate.EXISTS): lambda: 1.0,
    _event(Interpretation.EXRADII, Predicate.ACUTE):
        lambda: 24.0 * SQRT7 / 49.0 * math.asin(SQRT14 / 8.0) - 2.0 / 7.0,
    _event(Interpretation.INCENTER_DISTANCES, Predicate.EXISTS): lambda: 1.0,
    _event(Interpretation.CEVIAN_HWM, Predicate.EXISTS): lambda: 1.0,
    _event(Interpretation.TANGENT_CIRCLES, Predicate.EXISTS): lambda: 5.0 / 27.0,
    _event(Interpretation.ANGLE_BISECTORS, Predicate.EXISTS): lambda: 1.0,
    _event(Interpretation.CIRCUMCENTER_DISTANCES, Predicate.EXISTS): lambda: 1.0,
    _event(Interpretation.CIRCUMCENTER_DISTANCES, Predicate.ACUTE): lambda: 1.0,
}


def has_closed_form(event: EventDescriptor) -> bool:
    return event in CLOSED_FORMS


def closed_form(event: EventDescriptor) -> ProbabilityEstimate:
    """
    Exact probability of an event.

    Args:
        event: Event to evaluate

    Returns:
        ProbabilityEstimate with zero uncertainty

    Raises:
        NoClosedFormError: for events known only numerically
    """
    if event not in CLOSED_FORMS:
        raise NoClosedFormError(f"no closed form for {event}")
    return ProbabilityEstimate(event, CLOSED_FORMS[event](), Method.CLOSED_FORM)


def general_triangle_closed_form(T: TriangleSides) -> float:
    """Chance that the distances from a uniform interior point form a triangle."""
    a, b, c = T.as_tuple()
    return 2.0 * a * b * c / ((a + b) * (b + c) * (c + a))


def general_triangle_acute_closed_form(T: TriangleSides) -> float:
    """
    Acute variant, known exactly only for the isosceles (15/4, 15/4, 6) triangle.
    """
    if sorted(T.as_tuple()) != [3.75, 3.75, 6.0]:
        raise NoClosedFormError(f"no acute closed form for triangle {T.as_tuple()}")
    return (25.0 / 28.0 + 25.0 / 32.0 * math.log(13.0 / 5.0)
            - 100.0 / 49.0 * SQRT14 * math.asin(SQRT7 / 13.0))
