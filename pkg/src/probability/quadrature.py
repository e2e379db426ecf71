"""
Probabilities as one-dimensional integrals over region boundaries.

Each event maps to a QuadratureSpec; the probability is
offset + scale * integral(integrand, lo, hi), integrated with QUADPACK's
adaptive Gauss-Kronrod rule.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np
from scipy.integrate import quad

from config.config import QUAD_ABS_TOLERANCE, QUAD_SINGULAR_TOLERANCE
from src.exceptions import NoQuadratureError, ToleranceNotMetError
from src.predicates import EventDescriptor, Interpretation, Predicate
from src.probability.models import Method, ProbabilityEstimate

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class QuadratureSpec:
    integrand: Callable[[float], float]
    interval: Tuple[float, float]
    target_abs_error: float
    scale: float = 1.0
    offset: float = 0.0
    description: str = ''


def integrate(spec: QuadratureSpec) -> Tuple[float, float]:
    """
    Evaluate a spec.

    Args:
        spec: Integral description

    Returns:
        Tuple (value, absolute error bound) already scaled

    Raises:
        ToleranceNotMetError: when the error bound exceeds the target
    """
    lo, hi = spec.interval
    scale = abs(spec.scale) if spec.scale else 1.0
    integral, error = quad(spec.integrand, lo, hi,
                           epsabs=0.1 * spec.target_abs_error / scale, epsrel=0.0, limit=200)
    bound = scale * error
    if bound > spec.target_abs_error:
        raise ToleranceNotMetError(f"quadrature of {spec.description or 'integrand'}",
                                   bound, spec.target_abs_error)
    return spec.offset + spec.scale * integral, bound


def sqrt_quadratic_antiderivative(x: float, a: float) -> float:
    """Antiderivative of sqrt(x^2 + a) for a > 0."""
    root = math.sqrt(x * x + a)
    return 0.5 * x * root + 0.5 * a * math.log(x + root)


# --- integrands ------------------------------------------------------------

def _sides_acute() -> QuadratureSpec:
    # width of one obtuse lobe at height y inside the medial triangle
    def integrand(y: float) -> float:
        return y / SQRT3 - y * y / (SQRT3 * (SQRT3 - y))

    return QuadratureSpec(integrand, (0.0, SQRT3 / 2.0), QUAD_ABS_TOLERANCE,
                          scale=-SQRT3, offset=0.25, description='sides acute')


def _medians_acute() -> QuadratureSpec:
    # gap between the top of the central triangle and the hyperbola
    # y = (sqrt(9x^2 + 10) - 1) / (3 sqrt 3)
    def integrand(x: float) -> float:
        return SQRT3 / 4.0 - (math.sqrt(9.0 * x * x + 10.0) - 1.0) / (3.0 * SQRT3)

    return QuadratureSpec(integrand, (-0.25, 0.25), QUAD_ABS_TOLERANCE,
                          scale=SQRT3, offset=1.0 / 16.0, description='medians acute')


def _altitudes_exists() -> QuadratureSpec:
    def integrand(x: float) -> float:
        return 3.0 * SQRT3 / 5.0 - math.sqrt(3.0 * x * x / 5.0 + 12.0 / 25.0)

    return QuadratureSpec(integrand, (0.0, 1.0), QUAD_ABS_TOLERANCE,
                          scale=-2.0 * SQRT3, offset=1.0, description='altitudes exist')


ALTITUDES_ACUTE_END = (2.0 * math.sqrt(6.0) - SQRT3) / 7.0


def _altitudes_acute_radicand(t: float) -> float:
    """
    15t^2 - 6 sqrt3 t + 9 - 12t sqrt(2t^2 - 2 sqrt3 t + 3), rationalised as
    (P^2 - Q^2)/(P + Q) to avoid cancellation where it vanishes.
    """
    p = 15.0 * t * t - 6.0 * SQRT3 * t + 9.0
    inner = 2.0 * t * t - 2.0 * SQRT3 * t + 3.0
    q = 12.0 * t * math.sqrt(inner)
    return (p * p - 144.0 * t * t * inner) / (p + q)


def _altitudes_acute() -> QuadratureSpec:
    # the radicand has a simple zero at the upper limit: t = end - s^2 makes
    # the integrand vanish linearly instead of like a square root
    end = ALTITUDES_ACUTE_END

    def integrand(s: float) -> float:
        return 2.0 * s * math.sqrt(max(_altitudes_acute_radicand(end - s * s), 0.0))

    return QuadratureSpec(integrand, (0.0, math.sqrt(end)), QUAD_SINGULAR_TOLERANCE,
                          scale=-2.0 / SQRT3, offset=1.0, description='altitudes acute')


def _exradii_acute() -> QuadratureSpec:
    def integrand(x: float) -> float:
        return (SQRT3 + math.sqrt(3.0 * (8.0 - 7.0 * x * x))) / 7.0 - SQRT3 / 2.0

    return QuadratureSpec(integrand, (-0.5, 0.5), QUAD_ABS_TOLERANCE,
                          scale=SQRT3, offset=0.25, description='exradii acute')


CEVIAN_T_LOW = SQRT3 / (2.0 * math.sqrt(2.0) + 1.0)
CEVIAN_T_HIGH = SQRT3 / 3.0


def cevian_upper_curve(t: float) -> float:
    """x < f(t) along the ray y = t(1 - x): the median bound m < h w^2 / (2h^2 - w^2)."""
    m = SQRT3
    return (9.0 * t ** 3 - 9.0 * t * t * m - 3.0 * t + 3.0 * m) / (9.0 * t ** 3 + 5.0 * t * t * m + 9.0 * t - 3.0 * m)


def cevian_lower_curve(t: float) -> float:
    """x > g(t) along the ray y = t(1 - x): the lower median bound."""
    m = SQRT3
    a = 7.0 * t * t + 2.0 * m * t - 3.0
    b = 37.0 * t ** 4 + 20.0 * m * t ** 3 - 18.0 * t * t - 12.0 * m * t + 9.0
    root = 2.0 * t * math.sqrt(b)
    return ((t - m) * a + root) / ((t + m) * a + root)


def _cevian_acute() -> QuadratureSpec:
    # one of six congruent petals; the Jacobian of y = t(1 - x) is 1 - x
    def integrand(t: float) -> float:
        return (1.0 - cevian_lower_curve(t)) ** 2 - (1.0 - cevian_upper_curve(t)) ** 2

    return QuadratureSpec(integrand, (CEVIAN_T_LOW, CEVIAN_T_HIGH), QUAD_ABS_TOLERANCE,
                          scale=SQRT3, description='cevian acute')


def cevian_petal_area() -> Tuple[float, float]:
    """Area of the acute petal with 0 < h < w < m in the (x, t) parameterisation."""
    spec = _cevian_acute()
    value, error = integrate(QuadratureSpec(spec.integrand, spec.interval, spec.target_abs_error,
                                            scale=0.5, description='cevian petal'))
    return value, error


def _tangent_exists() -> QuadratureSpec:
    return QuadratureSpec(lambda x: 1.0 - 2.0 * x - 3.0 * x * x, (0.0, 1.0 / 3.0), 1e-12,
                          description='tangent circles exist')


QUADRATURES: Dict[EventDescriptor, Callable[[], QuadratureSpec]] = {
    EventDescriptor(Interpretation.SIDES, Predicate.ACUTE): _sides_acute,
    EventDescriptor(Interpretation.MEDIANS, Predicate.ACUTE): _medians_acute,
    EventDescriptor(Interpretation.ALTITUDES, Predicate.EXISTS): _altitudes_exists,
    EventDescriptor(Interpretation.ALTITUDES, Predicate.ACUTE): _altitudes_acute,
    EventDescriptor(Interpretation.EXRADII, Predicate.ACUTE): _exradii_acute,
    EventDescriptor(Interpretation.CEVIAN_HWM, Predicate.ACUTE): _cevian_acute,
    EventDescriptor(Interpretation.TANGENT_CIRCLES, Predicate.EXISTS): _tangent_exists,
}


def has_quadrature(event: EventDescriptor) -> bool:
    return event in QUADRATURES


def quadrature_spec(event: EventDescriptor) -> QuadratureSpec:
    if event not in QUADRATURES:
        raise NoQuadratureError(f"no integral representation for {event}")
    return QUADRATURES[event]()


def quadrature(event: EventDescriptor) -> ProbabilityEstimate:
    """
    Probability of an event from its boundary integral.

    Raises:
        NoQuadratureError: when the event has no integral representation
        ToleranceNotMetError: when the error bound exceeds the target
    """
    spec = quadrature_spec(event)
    value, bound = integrate(spec)
    logger.debug("Quadrature for %s: %.15f +- %.2e", event, value, bound)
    return ProbabilityEstimate(event, float(np.clip(value, 0.0, 1.0)), Method.QUADRATURE, bound)
