from src.probability.closed_form import (
    closed_form,
    general_triangle_acute_closed_form,
    general_triangle_closed_form,
)
from src.probability.engines import (
    available_methods,
    best_exact,
    estimate,
    general_triangle_probability,
    obtuse_acute_ratio,
)
from src.probability.models import Method, ProbabilityEstimate
from src.probability.monte_carlo import general_triangle_monte_carlo, monte_carlo
from src.probability.quadrature import QuadratureSpec, quadrature, sqrt_quadratic_antiderivative
from src.probability.validation import (
    AgreementChecker,
    CrossValidationReport,
    compare_samplers,
    cross_validate,
)
