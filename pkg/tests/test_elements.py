import math
import random
import unittest

import numpy as np

from src.elements import (
    TriangleKind,
    TriangleSides,
    acute_mask,
    altitudes,
    angle_bisectors,
    angles,
    area,
    circumcenter_distances,
    circumradius,
    classify,
    exradii,
    incenter_vertex_distances,
    inradius,
    medians,
    orthocenter_distances,
    vertex_cevians,
    vertex_coordinates,
)
from src.exceptions import ClassificationError, NoTriangleError


def random_triangle(rng: random.Random) -> TriangleSides:
    while True:
        a, b, c = (rng.uniform(0.05, 1.0) for _ in range(3))
        if a + b + c > 2.0 * max(a, b, c) * (1.0 + 1e-3):
            return TriangleSides(a, b, c)


def _distance(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _line_distance(p, q, point) -> float:
    """Distance from point to the line through p and q."""
    cross = (q[0] - p[0]) * (point[1] - p[1]) - (q[1] - p[1]) * (point[0] - p[0])
    return abs(cross) / _distance(p, q)


class TestForwardFormulas(unittest.TestCase):
    def setUp(self):
        self.right = TriangleSides(3.0, 4.0, 5.0)
        self.equilateral = TriangleSides(1.0, 1.0, 1.0)

    def test_right_triangle(self):
        """Reference values for the 3-4-5 triangle."""
        self.assertAlmostEqual(area(self.right), 6.0, places=12)
        self.assertAlmostEqual(circumradius(self.right), 2.5, places=12)
        self.assertAlmostEqual(inradius(self.right), 1.0, places=12)
        expected = (math.sqrt(73.0) / 2.0, math.sqrt(13.0), 2.5)
        for got, want in zip(medians(self.right), expected):
            self.assertAlmostEqual(got, want, places=12)
        for got, want in zip(altitudes(self.right), (4.0, 3.0, 2.4)):
            self.assertAlmostEqual(got, want, places=12)
        self.assertEqual(classify(self.right).kind, TriangleKind.RIGHT)

    def test_equilateral(self):
        """Equilateral triangle of unit side."""
        s = math.sqrt(3.0) / 2.0
        for h in altitudes(self.equilateral):
            self.assertAlmostEqual(h, s, places=14)
        for m in medians(self.equilateral):
            self.assertAlmostEqual(m, s, places=14)
        for w in angle_bisectors(self.equilateral):
            self.assertAlmostEqual(w, s, places=14)
        for d in circumcenter_distances(self.equilateral):
            self.assertAlmostEqual(d, 1.0 / (2.0 * math.sqrt(3.0)), places=14)
        self.assertTrue(classify(self.equilateral).is_acute)

    def test_exradii_right(self):
        """Exradii of the 3-4-5 triangle are 2, 3 and 6."""
        for got, want in zip(exradii(self.right), (2.0, 3.0, 6.0)):
            self.assertAlmostEqual(got, want, places=12)

    def test_invalid_sides(self):
        """Degenerate and non-positive side triples are rejected."""
        with self.assertRaises(NoTriangleError):
            TriangleSides(1.0, 2.0, 3.0)
        with self.assertRaises(NoTriangleError):
            TriangleSides(0.0, 1.0, 1.0)

    def test_obtuse_classification(self):
        """2-2-3 is obtuse; its circumcenter sits outside."""
        t = TriangleSides(2.0, 2.0, 3.0)
        self.assertEqual(classify(t).kind, TriangleKind.OBTUSE)
        self.assertLess(circumcenter_distances(t, signed=True)[2], 0.0)
        self.assertGreater(circumcenter_distances(t)[2], 0.0)
        with self.assertRaises(ClassificationError):
            circumcenter_distances(t, require_acute=True)

    def test_homogeneity(self):
        """Every element scales linearly with the sides."""
        rng = random.Random(1)
        for _ in range(200):
            t = random_triangle(rng)
            k = rng.uniform(0.1, 10.0)
            for forward in (medians, altitudes, exradii, circumcenter_distances,
                            incenter_vertex_distances, angle_bisectors):
                for x, y in zip(forward(t), forward(t.scaled(k))):
                    self.assertAlmostEqual(y / (k * x), 1.0, places=10)

    def test_cosine_sum_identity(self):
        """u + v + w = R + r for acute triangles."""
        rng = random.Random(2)
        checked = 0
        while checked < 200:
            t = random_triangle(rng)
            if not classify(t).is_acute:
                continue
            checked += 1
            total = sum(circumcenter_distances(t))
            self.assertAlmostEqual(total / (circumradius(t) + inradius(t)), 1.0, places=10)

    def test_angles_sum(self):
        """Angles sum to pi."""
        rng = random.Random(3)
        for _ in range(200):
            self.assertAlmostEqual(sum(angles(random_triangle(rng))), math.pi, places=12)

    def test_cevian_order(self):
        """Altitude <= bisector <= median from every vertex."""
        rng = random.Random(4)
        for _ in range(200):
            t = random_triangle(rng)
            for vertex in ('A', 'B', 'C'):
                h, w, m = vertex_cevians(t, vertex)
                self.assertLessEqual(h, w * (1.0 + 1e-12))
                self.assertLessEqual(w, m * (1.0 + 1e-12))
        self.assertEqual(vertex_cevians(self.right, 1), vertex_cevians(self.right, 'B'))

    def test_orthocenter_twice_circumcenter(self):
        """HA = 2 d(O, BC)."""
        for x, y in zip(circumcenter_distances(self.right), orthocenter_distances(self.right)):
            self.assertAlmostEqual(y, 2.0 * x, places=12)

    def test_acute_mask_matches_classify(self):
        """Vectorised classification agrees with the scalar one."""
        rng = random.Random(5)
        triangles = [random_triangle(rng) for _ in range(500)]
        a, b, c = (np.array(v) for v in zip(*(t.as_tuple() for t in triangles)))
        mask = acute_mask(a, b, c)
        for t, flag in zip(triangles, mask):
            self.assertEqual(bool(flag), classify(t).is_acute)


class TestCoordinateOracle(unittest.TestCase):
    """Side formulas against constructions on explicit vertex coordinates."""

    def setUp(self):
        self.rng = random.Random(6)

    def test_elements_match_coordinates(self):
        """Medians, altitudes, bisectors and centre distances within 1e-10."""
        for _ in range(300):
            t = random_triangle(self.rng)
            A, B, C = vertex_coordinates(t)
            a, b, c = t.as_tuple()
            self.assertAlmostEqual(_distance(A, B) / c, 1.0, places=12)
            self.assertAlmostEqual(_distance(A, C) / b, 1.0, places=12)

            mid = ((B[0] + C[0]) / 2.0, (B[1] + C[1]) / 2.0)
            self.assertAlmostEqual(_distance(A, mid) / medians(t)[0], 1.0, places=10)
            self.assertAlmostEqual(_line_distance(B, C, A) / altitudes(t)[0], 1.0, places=10)

            # bisector foot divides BC in the ratio c : b
            foot = (B[0] + (C[0] - B[0]) * c / (b + c), 0.0)
            self.assertAlmostEqual(_distance(A, foot) / angle_bisectors(t)[0], 1.0, places=10)

            incenter = ((a * A[0] + b * B[0] + c * C[0]) / (a + b + c),
                        (a * A[1] + b * B[1] + c * C[1]) / (a + b + c))
            for vertex, d in zip((A, B, C), incenter_vertex_distances(t)):
                self.assertAlmostEqual(_distance(vertex, incenter) / d, 1.0, places=10)

            ox = a / 2.0
            oy = (A[0] ** 2 + A[1] ** 2 - a * A[0]) / (2.0 * A[1])
            O = (ox, oy)
            for (p, q), d in zip(((B, C), (C, A), (A, B)), circumcenter_distances(t)):
                self.assertAlmostEqual(_line_distance(p, q, O), d, delta=1e-10 * circumradius(t))


if __name__ == '__main__':
    unittest.main()
