"""
Agreement checks between probability engines.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.stats import chi2_contingency

from config.config import (
    AGREEMENT_SIGMAS,
    DEFAULT_WORKERS,
    EXPERIMENTAL_TOLERANCE,
    QUAD_AGREEMENT_FLOOR,
)
from src.exceptions import BrokenStickError
from src.model import SampleStream, SamplerKind, sample_batch, triangular_cell_counts
from src.predicates import EventDescriptor, Interpretation, Predicate
from src.probability.engines import available_methods, estimate
from src.probability.models import Method, ProbabilityEstimate

logger = logging.getLogger(__name__)

# Values reported only from simulation.
EXPERIMENTAL_VALUES: Dict[EventDescriptor, float] = {
    EventDescriptor(Interpretation.INCENTER_DISTANCES, Predicate.ACUTE): 0.1962,
    EventDescriptor(Interpretation.ANGLE_BISECTORS, Predicate.ACUTE): 0.1195,
    EventDescriptor(Interpretation.TANGENT_CIRCLES, Predicate.ACUTE): 0.047845,
}


@dataclass(frozen=True)
class AgreementCheck:
    first: str
    second: str
    difference: float
    allowed: float

    @property
    def passed(self) -> bool:
        return self.difference <= self.allowed


@dataclass
class CrossValidationReport:
    event: EventDescriptor
    estimates: List[ProbabilityEstimate] = field(default_factory=list)
    checks: List[AgreementCheck] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def get(self, method: Method) -> Optional[ProbabilityEstimate]:
        for item in self.estimates:
            if item.method is method:
                return item
        return None


class AgreementChecker:
    def __init__(self):
        self.thresholds = {
            'sigmas': AGREEMENT_SIGMAS,
            'quadrature_floor': QUAD_AGREEMENT_FLOOR,
            'experimental': EXPERIMENTAL_TOLERANCE,
        }
        self.failures: Dict[str, int] = {}

    def set_threshold(self, name: str, value: float):
        if name not in self.thresholds:
            raise KeyError(f"unknown threshold '{name}'")
        self.thresholds[name] = value

    def compare(self, first: ProbabilityEstimate, second: ProbabilityEstimate) -> AgreementCheck:
        """
        Monte Carlo against anything allows `sigmas` standard errors plus the
        other bound; two deterministic engines allow their summed bounds.
        """
        if Method.MONTE_CARLO in (first.method, second.method):
            mc, other = (first, second) if first.method is Method.MONTE_CARLO else (second, first)
            allowed = self.thresholds['sigmas'] * mc.uncertainty + other.uncertainty
        else:
            allowed = first.uncertainty + second.uncertainty + self.thresholds['quadrature_floor']
        check = AgreementCheck(first.method.value, second.method.value,
                               abs(first.value - second.value), allowed)
        self._record(first.event, check)
        return check

    def compare_reference(self, mc: ProbabilityEstimate, reference: float) -> AgreementCheck:
        """Simulation against a published experimental value."""
        allowed = self.thresholds['experimental'] + self.thresholds['sigmas'] * mc.uncertainty
        check = AgreementCheck(mc.method.value, 'experimental', abs(mc.value - reference), allowed)
        self._record(mc.event, check)
        return check

    def _record(self, event: Optional[EventDescriptor], check: AgreementCheck):
        key = str(event)
        if check.passed:
            self.failures[key] = 0
            return
        self.failures[key] = self.failures.get(key, 0) + 1
        logger.warning("%s: %s and %s differ by %.3e (allowed %.3e)",
                       key, check.first, check.second, check.difference, check.allowed)


def cross_validate(event: EventDescriptor, n: int, seed: int,
                   sampler: SamplerKind = SamplerKind.DIRECT,
                   methods: Optional[Sequence[Method]] = None,
                   workers: int = DEFAULT_WORKERS,
                   checker: Optional[AgreementChecker] = None) -> CrossValidationReport:
    """
    Run every requested engine for an event and compare the results.

    Args:
        event: Event to evaluate
        n: Monte Carlo sample count
        seed: Monte Carlo seed
        sampler: Model sampler
        methods: Engines to run, default all of them
        workers: Monte Carlo threads
        checker: Agreement thresholds

    Returns:
        CrossValidationReport
    """
    checker = checker or AgreementChecker()
    wanted = list(methods) if methods else list(Method)
    report = CrossValidationReport(event)
    possible = available_methods(event)

    for method in wanted:
        if method not in possible:
            report.notes.append(f"no {method.value} for {event}")
            continue
        try:
            report.estimates.append(estimate(event, method, n, SampleStream(seed, 0, sampler), workers))
        except BrokenStickError as e:
            report.notes.append(f"{method.value} failed: {e}")
            logger.error("%s %s failed: %s", event, method.value, e)

    closed = report.get(Method.CLOSED_FORM)
    quad = report.get(Method.QUADRATURE)
    mc = report.get(Method.MONTE_CARLO)
    if closed and quad:
        report.checks.append(checker.compare(quad, closed))
    exact = closed or quad
    if mc and exact:
        report.checks.append(checker.compare(mc, exact))
    if mc and not exact and event in EXPERIMENTAL_VALUES:
        report.checks.append(checker.compare_reference(mc, EXPERIMENTAL_VALUES[event]))
    if mc and mc.failures:
        report.notes.append(f"{mc.failures} samples failed to reconstruct")
    return report


def compare_samplers(n: int, seed: int, divisions: int = 8) -> float:
    """
    Chi-square p-value for the direct and parallelogram samplers having the
    same cell frequencies on the triangular grid.
    """
    counts = []
    for kind in (SamplerKind.DIRECT, SamplerKind.PARALLELOGRAM):
        x, y = sample_batch(SampleStream(seed, 0, kind), n)
        counts.append(triangular_cell_counts(x, y, divisions))
    table = np.vstack(counts)
    table = table[:, table.sum(axis=0) > 0]
    _, p_value, _, _ = chi2_contingency(table)
    logger.info("Sampler chi-square over %d cells: p=%.4f", table.shape[1], p_value)
    return float(p_value)
