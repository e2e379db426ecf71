import math
import random
import unittest

import numpy as np

from src.elements import (
    TriangleKind,
    TriangleSides,
    altitudes,
    angle_bisectors,
    circumcenter_distances,
    classify,
    exradii,
    incenter_vertex_distances,
    medians,
    orthocenter_distances,
    vertex_cevians,
)
from src.exceptions import IterationError, NoTriangleError, NoUniqueConstructionError, RootBracketError
from src.model import SampleStream, points_to_triples, sample_batch
from src.solvers import (
    PUBLISHED_INTEGER_SOLUTIONS,
    _squarefree_kernels,
    Branch,
    cevian_acute_window,
    circumcenter_candidates,
    circumcenter_sum_identity,
    find_integer_circum_solutions,
    pell_family_solutions,
    relative_residual,
    solve_bisector_batch,
    solve_cubic_in_bracket,
    solve_from_altitudes,
    solve_from_angle_bisectors,
    solve_from_cevian_triple,
    solve_from_circumcenter_distances,
    solve_from_exradii,
    solve_from_incenter_distances,
    solve_from_medians,
    solve_from_orthocenter_distances,
)

SQRT3 = math.sqrt(3.0)


def random_triangle(rng: random.Random) -> TriangleSides:
    while True:
        a, b, c = (rng.uniform(0.05, 1.0) for _ in range(3))
        if a + b + c > 2.0 * max(a, b, c) * (1.0 + 1e-3):
            return TriangleSides(a, b, c)


def _margin(t: TriangleSides) -> float:
    """Smallest of b^2 + c^2 - a^2 and its rotations, relative to the largest side squared."""
    a2, b2, c2 = t.a * t.a, t.b * t.b, t.c * t.c
    return min(b2 + c2 - a2, a2 + c2 - b2, a2 + b2 - c2) / max(a2, b2, c2)


class SidesAssertions(unittest.TestCase):
    def assertSidesClose(self, got: TriangleSides, want, rel: float = 1e-9, ordered: bool = True):
        got_sides = got.as_tuple() if ordered else sorted(got.as_tuple())
        want_sides = tuple(want) if ordered else sorted(want)
        for x, y in zip(got_sides, want_sides):
            self.assertLess(abs(x - y), rel * abs(y), msg=f"{got_sides} != {want_sides}")


class TestClosedFormSolvers(SidesAssertions):
    def setUp(self):
        self.rng = random.Random(10)

    def test_medians_examples(self):
        """Medians of 3-4-5, the equal triple and a failing triple."""
        self.assertSidesClose(solve_from_medians(math.sqrt(73.0) / 2.0, math.sqrt(13.0), 2.5).sides, (3, 4, 5))
        self.assertSidesClose(solve_from_medians(1, 1, 1).sides, (2 / SQRT3,) * 3)
        with self.assertRaises(NoTriangleError):
            solve_from_medians(1, 1, 2.1)

    def test_altitudes_examples(self):
        """Altitudes of 3-4-5, the equal triple and a failing triple."""
        self.assertSidesClose(solve_from_altitudes(1, 1, 1).sides, (2 / SQRT3,) * 3)
        self.assertSidesClose(solve_from_altitudes(4, 3, 12 / 5).sides, (3, 4, 5))
        with self.assertRaises(NoTriangleError):
            solve_from_altitudes(1, 1, 0.49)

    def test_exradii_examples(self):
        """Exradii always give a triangle."""
        self.assertSidesClose(solve_from_exradii(1, 1, 1).sides, (2 / SQRT3,) * 3)
        self.assertSidesClose(solve_from_exradii(2, 3, 6).sides, (3, 4, 5))
        self.assertIsInstance(solve_from_exradii(0.01, 5.0, 123.0).sides, TriangleSides)

    def test_incenter_examples(self):
        """Equal distances give r = 1/2 and side sqrt3."""
        result = solve_from_incenter_distances(1, 1, 1)
        self.assertAlmostEqual(result.auxiliary, 0.5, places=14)
        self.assertSidesClose(result.sides, (SQRT3,) * 3)
        scaled = solve_from_incenter_distances(0.7, 1.1, 1.3)
        bigger = solve_from_incenter_distances(7.0, 11.0, 13.0)
        self.assertSidesClose(bigger.sides, [10.0 * s for s in scaled.sides.as_tuple()])

    def test_round_trips(self):
        """Forward map of every reconstruction reproduces its input within 1e-9."""
        solvers = [
            (solve_from_medians, medians),
            (solve_from_altitudes, altitudes),
            (solve_from_exradii, exradii),
            (solve_from_incenter_distances, incenter_vertex_distances),
        ]
        for _ in range(10_000):
            t = random_triangle(self.rng)
            for solve, forward in solvers:
                result = solve(*forward(t))
                self.assertLess(result.residual, 1e-9)
                self.assertSidesClose(result.sides, t.as_tuple(), rel=1e-8)

    def test_median_inequality_oracle(self):
        """solve_from_medians succeeds exactly when the median inequality holds."""
        steps = 50
        for i in range(1, steps):
            for j in range(1, steps - i):
                u, v, w = i / steps, j / steps, (steps - i - j) / steps
                if abs(u + v + w - 2.0 * max(u, v, w)) < 1e-9:
                    continue
                squares = [4.0 / 9.0 * (2.0 * (y * y + z * z) - x * x) for x, y, z in ((u, v, w), (v, u, w), (w, u, v))]
                sides = [math.sqrt(s) for s in squares if s > 0.0]
                oracle = len(sides) == 3 and sum(sides) > 2.0 * max(sides)
                try:
                    solve_from_medians(u, v, w)
                    solved = True
                except NoTriangleError:
                    solved = False
                self.assertEqual(solved, oracle, msg=f"{(u, v, w)}")

    def test_uniqueness_spot_check(self):
        """Perturbing a reconstruction increases its residual."""
        t = random_triangle(self.rng)
        for solve, forward in ((solve_from_medians, medians), (solve_from_exradii, exradii),
                               (solve_from_incenter_distances, incenter_vertex_distances)):
            target = forward(t)
            result = solve(*target)
            for k in range(3):
                for sign in (1.0, -1.0):
                    sides = list(result.sides.as_tuple())
                    sides[k] *= 1.0 + sign * 1e-3
                    self.assertGreater(relative_residual(forward(TriangleSides(*sides)), target),
                                       result.residual)


class TestCubic(unittest.TestCase):
    def test_root_invariants(self):
        """Bracketed root has a tiny residual against the largest monomial."""
        root = solve_cubic_in_bracket((1.0, 0.0, -3.0, -2.0), 1.0, 2.0 * (1.0 + 1e-12))
        self.assertAlmostEqual(root.root, 2.0, places=12)
        self.assertLessEqual(abs(root.value()), 1e-12 * root.scale())

    def test_no_sign_change(self):
        """A bracket without a sign change is an error."""
        with self.assertRaises(RootBracketError):
            solve_cubic_in_bracket((1.0, 0.0, 0.0, 1.0), 0.0, 1.0)


class TestCircumcenterSolver(SidesAssertions):
    def setUp(self):
        self.rng = random.Random(11)

    def test_examples(self):
        """Published and analytic reconstructions."""
        result = solve_from_circumcenter_distances(2, 7, 11)
        self.assertAlmostEqual(result.auxiliary, 14.0, places=10)
        self.assertSidesClose(result.sides, (16 * SQRT3, 14 * SQRT3, 10 * SQRT3))
        result = solve_from_circumcenter_distances(1, 1, 1)
        self.assertAlmostEqual(result.auxiliary, 2.0, places=10)
        self.assertSidesClose(result.sides, (2 * SQRT3,) * 3)
        self.assertAlmostEqual(solve_from_circumcenter_distances(12, 22, 28).auxiliary, 42.0, places=9)

    def test_orthocenter_examples(self):
        """Orthocenter distances halve to the circumcenter case."""
        self.assertSidesClose(solve_from_orthocenter_distances(4, 14, 22).sides,
                              (16 * SQRT3, 14 * SQRT3, 10 * SQRT3))
        self.assertSidesClose(solve_from_orthocenter_distances(2, 2, 2).sides, (2 * SQRT3,) * 3)

    def test_acute_round_trip(self):
        """Acute triangles come back from their distances, with the sum identity."""
        checked = 0
        while checked < 2000:
            t = random_triangle(self.rng)
            if _margin(t) < 0.05:
                continue
            checked += 1
            u, v, w = circumcenter_distances(t)
            result = solve_from_circumcenter_distances(u, v, w)
            self.assertLess(result.residual, 1e-9)
            self.assertSidesClose(result.sides, t.as_tuple(), rel=1e-8)
            self.assertTrue(classify(result.sides).is_acute)
            self.assertLess(abs(circumcenter_sum_identity(u, v, w, result.auxiliary)), 1e-10 * (u + v + w))
            omega = math.sqrt((u * u + v * v + w * w) / 3.0)
            self.assertGreater(result.auxiliary, max(u, v, w))
            self.assertLessEqual(result.auxiliary, 2.0 * omega * (1.0 + 1e-12))

            h = solve_from_orthocenter_distances(*orthocenter_distances(t))
            self.assertSidesClose(h.sides, t.as_tuple(), rel=1e-8)

    def test_obtuse_branch(self):
        """The 2-2-3 triangle is rebuilt from its unsigned distances."""
        t = TriangleSides(2.0, 2.0, 3.0)
        result = solve_from_circumcenter_distances(*circumcenter_distances(t), branch=Branch.OBTUSE)
        self.assertSidesClose(result.sides, (2.0, 2.0, 3.0), rel=1e-8)
        self.assertEqual(classify(result.sides).kind, TriangleKind.OBTUSE)

    def test_obtuse_round_trip(self):
        """Each obtuse triangle is the single candidate for its distances."""
        checked = 0
        while checked < 1000:
            t = random_triangle(self.rng)
            if _margin(t) > -0.05:
                continue
            low, mid, _ = sorted(circumcenter_distances(t))
            if mid - low < 0.01 * mid:
                continue
            checked += 1
            distances = circumcenter_distances(t)
            result = solve_from_circumcenter_distances(*distances, branch=Branch.OBTUSE)
            self.assertLess(result.residual, 1e-9)
            self.assertSidesClose(result.sides, t.as_tuple(), rel=1e-7)
            self.assertEqual(len(circumcenter_candidates(*distances, Branch.OBTUSE)), 1)

    def test_degenerate_obtuse(self):
        """Equal smaller distances leave no obtuse triangle."""
        with self.assertRaises(NoTriangleError):
            solve_from_circumcenter_distances(3.0, 1.0, 1.0, branch=Branch.OBTUSE)


class TestCevianSolver(SidesAssertions):
    def test_right_triangle(self):
        """Altitude, bisector and median from the right angle of 3-4-5."""
        result = solve_from_cevian_triple(12 / 5, 12 * math.sqrt(2.0) / 7, 5 / 2)
        self.assertSidesClose(result.sides, (3, 4, 5), rel=1e-9, ordered=False)

    def test_near_isosceles(self):
        """Close cevians still reconstruct cleanly."""
        self.assertLess(solve_from_cevian_triple(1.0, 1.0001, 1.00015).residual, 1e-9)

    def test_obtuse_example(self):
        """(1, 2, 3) builds an obtuse triangle."""
        result = solve_from_cevian_triple(1, 2, 3)
        self.assertEqual(classify(result.sides).kind, TriangleKind.OBTUSE)
        self.assertIsNone(cevian_acute_window(1, 2))

    def test_ordering_required(self):
        """Anything but strict h < w < m is refused."""
        for triple in ((1, 1, 1), (2, 1, 3), (1, 3, 2), (1, 2, 2)):
            with self.assertRaises(NoUniqueConstructionError):
                solve_from_cevian_triple(*triple)
        self.assertTrue(issubclass(NoUniqueConstructionError, NoTriangleError))

    def test_round_trip(self):
        """Cevians from vertex A of random triangles come back."""
        rng = random.Random(12)
        checked = 0
        while checked < 10_000:
            t = random_triangle(rng)
            h, w, m = vertex_cevians(t, 'A')
            if w < h * 1.001 or m < w * 1.001:
                continue
            checked += 1
            result = solve_from_cevian_triple(h, w, m)
            self.assertLess(result.residual, 1e-9)
            self.assertSidesClose(result.sides, t.as_tuple(), rel=1e-6, ordered=False)

    def test_window_nontrivial(self):
        """The acute window is a proper interval whenever w^2 < 2h^2."""
        rng = random.Random(13)
        for _ in range(1000):
            h = rng.uniform(0.1, 1.0)
            w = rng.uniform(h, math.sqrt(2.0) * h)
            window = cevian_acute_window(h, w)
            self.assertIsNotNone(window)
            lower, upper = window
            self.assertLess(lower, upper)


class TestBisectorSolver(SidesAssertions):
    def test_examples(self):
        """Equal bisectors and the 3-4-5 bisectors."""
        self.assertSidesClose(solve_from_angle_bisectors(1, 1, 1).sides, (2 / SQRT3,) * 3, rel=1e-9)
        right = TriangleSides(3.0, 4.0, 5.0)
        self.assertSidesClose(solve_from_angle_bisectors(*angle_bisectors(right)).sides, (3, 4, 5), rel=1e-8)

    def test_round_trip(self):
        """Random triangles come back from their bisectors."""
        rng = random.Random(14)
        triangles = [random_triangle(rng) for _ in range(10_000)]
        targets = np.array([angle_bisectors(t) for t in triangles])
        sides, residual, converged, _ = solve_bisector_batch(targets)
        self.assertTrue(converged.all())
        self.assertLess(residual.max(), 1e-10)
        want = np.array([t.as_tuple() for t in triangles])
        self.assertLess(np.max(np.abs(sides - want) / want), 1e-6)

    def test_convergence_on_model_samples(self):
        """Every sampled stick triple has a bisector triangle."""
        alpha, beta, gamma = points_to_triples(*sample_batch(SampleStream(15), 100_000))
        _, residual, converged, _ = solve_bisector_batch(np.stack([alpha, beta, gamma], axis=-1))
        self.assertTrue(converged.all(), msg=f"worst residual {residual.max():.3e}")

    def test_iteration_error(self):
        """A starved iteration budget is reported with its residual."""
        with self.assertRaises(IterationError) as context:
            solve_from_angle_bisectors(1.0, 0.2, 0.9, max_iter=1, tol=1e-15)
        self.assertGreater(context.exception.residual, 0.0)


class TestIntegerSolutions(unittest.TestCase):
    def test_small_limits(self):
        """(2, 7, 11, 14) appears from limit 14 on."""
        self.assertIn((2, 7, 11, 14), find_integer_circum_solutions(14))
        self.assertNotIn((2, 7, 11, 14), find_integer_circum_solutions(13))
        self.assertIn((1, 1, 1, 2), find_integer_circum_solutions(2))

    def test_published_table(self):
        """Every published quadruple is found and solves the cubic."""
        solutions = find_integer_circum_solutions(42)
        for quadruple in PUBLISHED_INTEGER_SOLUTIONS:
            self.assertIn(quadruple, solutions)
        for u, v, w, radius in solutions:
            self.assertTrue(1 <= u <= v <= w < radius <= 42)
            self.assertEqual(radius ** 3 - (u * u + v * v + w * w) * radius - 2 * u * v * w, 0)
        self.assertEqual(solutions, sorted(solutions, key=lambda q: (q[3], q[0], q[1], q[2])))

    def test_pell_family_subset(self):
        """The R = uv family is contained in the exhaustive search."""
        family = pell_family_solutions(100)
        self.assertIn((2, 2, 2, 4), family)
        self.assertIn((2, 7, 11, 14), family)
        self.assertTrue(set(family) <= set(find_integer_circum_solutions(100)))

    def test_equal_distances(self):
        """(u, u, u, 2u) solves the cubic for every u."""
        solutions = set(find_integer_circum_solutions(20))
        for u in range(1, 11):
            self.assertIn((u, u, u, 2 * u), solutions)

    def test_matches_brute_force(self):
        """Kernel grouping finds exactly what a direct search finds."""
        expected = []
        for radius in range(2, 41):
            for u in range(1, radius):
                for v in range(u, radius):
                    for w in range(v, radius):
                        if radius ** 3 - (u * u + v * v + w * w) * radius - 2 * u * v * w == 0:
                            expected.append((u, v, w, radius))
        self.assertEqual(find_integer_circum_solutions(40), expected)

    def test_squarefree_kernels(self):
        """Square factors are divided out completely."""
        kernel = _squarefree_kernels(72)
        self.assertEqual([int(kernel[k]) for k in (1, 4, 8, 12, 18, 36, 50, 72)], [1, 1, 2, 3, 2, 1, 2, 2])


class TestResidual(unittest.TestCase):
    def test_relative_error(self):
        """Comparable components are compared relatively."""
        self.assertAlmostEqual(relative_residual((2.0, 3.0 * (1.0 + 1e-6)), (2.0, 3.0)), 1e-6, delta=1e-12)

    def test_tiny_component_floor(self):
        """A component far below the largest is measured against the floor."""
        self.assertLess(relative_residual((2.0, 3.0, 1e-8 + 1e-16), (2.0, 3.0, 1e-8)), 1e-9)
        self.assertGreater(relative_residual((2.0, 3.0, 2e-8), (2.0, 3.0, 1e-8)), 1e-9)


if __name__ == '__main__':
    unittest.main()
