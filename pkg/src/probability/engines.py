"""
Dispatch across the three probability engines.
"""
import logging
from typing import List, Optional, Union

from config.config import DEFAULT_WORKERS
from src.elements import TriangleSides
from src.exceptions import NoClosedFormError
from src.model import SampleStream
from src.predicates import EventDescriptor, Interpretation, Predicate
from src.probability.closed_form import closed_form, general_triangle_closed_form, has_closed_form
from src.probability.models import Method, ProbabilityEstimate
from src.probability.monte_carlo import monte_carlo
from src.probability.quadrature import has_quadrature, quadrature

logger = logging.getLogger(__name__)


def available_methods(event: EventDescriptor) -> List[Method]:
    methods = []
    if has_closed_form(event):
        methods.append(Method.CLOSED_FORM)
    if has_quadrature(event):
        methods.append(Method.QUADRATURE)
    methods.append(Method.MONTE_CARLO)
    return methods


def estimate(event: EventDescriptor, method: Method, n: Optional[int] = None,
             stream: Optional[SampleStream] = None,
             workers: int = DEFAULT_WORKERS) -> ProbabilityEstimate:
    if method is Method.CLOSED_FORM:
        return closed_form(event)
    if method is Method.QUADRATURE:
        return quadrature(event)
    if n is None or stream is None:
        raise ValueError("Monte Carlo needs a sample count and a stream")
    return monte_carlo(event, n, stream, workers)


def best_exact(event: EventDescriptor) -> ProbabilityEstimate:
    """Closed form when one exists, otherwise the boundary integral."""
    if has_closed_form(event):
        return closed_form(event)
    if has_quadrature(event):
        return quadrature(event)
    raise NoClosedFormError(f"{event} is known only experimentally")


Probability = Union[float, ProbabilityEstimate]


def obtuse_acute_ratio(interpretation: Interpretation, p_exists: Optional[Probability] = None,
                       p_acute: Optional[Probability] = None) -> float:
    """
    (P(exists) - P(acute)) / P(acute); right triangles have probability zero.

    Args:
        interpretation: Event family
        p_exists: Existence probability, default the best exact value
        p_acute: Acute probability, default the best exact value

    Returns:
        Ratio of obtuse to acute outcomes
    """
    if p_exists is None:
        p_exists = best_exact(EventDescriptor(interpretation, Predicate.EXISTS))
    if p_acute is None:
        p_acute = best_exact(EventDescriptor(interpretation, Predicate.ACUTE))
    exists = p_exists.value if isinstance(p_exists, ProbabilityEstimate) else float(p_exists)
    acute = p_acute.value if isinstance(p_acute, ProbabilityEstimate) else float(p_acute)
    if acute == 0.0:
        return float('inf')
    return (exists - acute) / acute


def general_triangle_probability(T: TriangleSides) -> ProbabilityEstimate:
    """2abc / ((a + b)(b + c)(c + a)) for the distances from a point of T."""
    return ProbabilityEstimate(None, general_triangle_closed_form(T), Method.CLOSED_FORM)
