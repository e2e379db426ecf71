import unittest

from src.model import SamplerKind
from src.predicates import EventDescriptor, Interpretation, Predicate
from src.probability import AgreementChecker, Method, ProbabilityEstimate, cross_validate


class TestAgreementChecker(unittest.TestCase):
    def setUp(self):
        self.checker = AgreementChecker()
        self.event = EventDescriptor(Interpretation.SIDES, Predicate.ACUTE)
        self.exact = ProbabilityEstimate(self.event, 0.0794, Method.CLOSED_FORM)

    def test_threshold_setting(self):
        """Test setting custom thresholds."""
        self.checker.set_threshold('sigmas', 3.0)
        self.assertEqual(self.checker.thresholds['sigmas'], 3.0)
        with self.assertRaises(KeyError):
            self.checker.set_threshold('humidity', 1.0)

    def test_monte_carlo_band(self):
        """Monte Carlo is allowed four standard errors."""
        close = ProbabilityEstimate(self.event, 0.0802, Method.MONTE_CARLO, uncertainty=0.0003)
        far = ProbabilityEstimate(self.event, 0.0810, Method.MONTE_CARLO, uncertainty=0.0003)
        self.assertTrue(self.checker.compare(close, self.exact).passed)
        self.assertFalse(self.checker.compare(far, self.exact).passed)

    def test_deterministic_band(self):
        """Quadrature and closed form may differ by their summed bounds."""
        quad = ProbabilityEstimate(self.event, 0.0794 + 5e-11, Method.QUADRATURE, uncertainty=1e-10)
        self.assertTrue(self.checker.compare(quad, self.exact).passed)
        quad = ProbabilityEstimate(self.event, 0.0795, Method.QUADRATURE, uncertainty=1e-10)
        self.assertFalse(self.checker.compare(quad, self.exact).passed)

    def test_failure_count_reset(self):
        """Test failure count reset on agreement."""
        far = ProbabilityEstimate(self.event, 0.2, Method.MONTE_CARLO, uncertainty=0.001)
        self.checker.compare(far, self.exact)
        self.checker.compare(far, self.exact)
        self.assertEqual(self.checker.failures[str(self.event)], 2)
        self.checker.compare(self.exact, self.exact)
        self.assertEqual(self.checker.failures.get(str(self.event), 0), 0)

    def test_experimental_reference(self):
        """Simulation-only values get the experimental tolerance."""
        incenter = EventDescriptor(Interpretation.INCENTER_DISTANCES, Predicate.ACUTE)
        mc = ProbabilityEstimate(incenter, 0.1985, Method.MONTE_CARLO, uncertainty=0.0004)
        self.assertTrue(self.checker.compare_reference(mc, 0.1962).passed)
        self.checker.set_threshold('experimental', 0.0)
        self.assertFalse(self.checker.compare_reference(mc, 0.1962).passed)


class TestCrossValidation(unittest.TestCase):
    def test_three_engines_agree(self):
        """Closed form, quadrature and simulation agree for the classical acute case."""
        report = cross_validate(EventDescriptor(Interpretation.SIDES, Predicate.ACUTE), 1_000_000, 42)
        self.assertEqual([e.method for e in report.estimates], list(Method))
        self.assertEqual(len(report.checks), 2)
        self.assertTrue(report.passed)

    def test_simulation_only(self):
        """Events without exact methods are noted and checked against the reference value."""
        event = EventDescriptor(Interpretation.INCENTER_DISTANCES, Predicate.ACUTE)
        report = cross_validate(event, 1_000_000, 42, SamplerKind.PARALLELOGRAM)
        self.assertEqual([e.method for e in report.estimates], [Method.MONTE_CARLO])
        self.assertEqual(len(report.notes), 2)
        self.assertEqual(report.checks[0].second, 'experimental')
        self.assertTrue(report.passed)
        self.assertEqual(report.get(Method.MONTE_CARLO).sampler, 'parallelogram')

    def test_selected_methods(self):
        """Only the requested engines run."""
        event = EventDescriptor(Interpretation.MEDIANS, Predicate.EXISTS)
        report = cross_validate(event, 200_000, 1, methods=[Method.CLOSED_FORM, Method.MONTE_CARLO])
        self.assertIsNone(report.get(Method.QUADRATURE))
        self.assertEqual(report.get(Method.CLOSED_FORM).value, 0.25)
        self.assertTrue(report.passed)


if __name__ == '__main__':
    unittest.main()
