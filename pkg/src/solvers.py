"""
Inverse constructions: recover a triangle from a triple of its elements.

Every solver returns a Reconstruction whose residual is the largest relative
mismatch between the forward-mapped elements and the input triple.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from config.config import BISECTOR_MAX_ITER, BISECTOR_TOLERANCE, RESIDUAL_FLOOR, RESIDUAL_LIMIT
from src.elements import (
    TriangleKind,
    TriangleSides,
    angle_bisectors,
    circumcenter_distances,
    classify,
    exradii,
    incenter_vertex_distances,
    medians,
    altitudes,
    area,
    orthocenter_distances,
    vertex_cevians,
)
from src.exceptions import (
    IterationError,
    NoTriangleError,
    NoUniqueConstructionError,
    RootBracketError,
)

logger = logging.getLogger(__name__)

Triple = Tuple[float, float, float]
Quadruple = Tuple[int, int, int, int]


class Branch(Enum):
    ACUTE = 'acute'
    OBTUSE = 'obtuse'


@dataclass(frozen=True)
class Reconstruction:
    sides: TriangleSides
    auxiliary: Optional[float]
    residual: float


@dataclass(frozen=True)
class CubicRoot:
    coefficients: Tuple[float, float, float, float]
    root: float
    bracket: Tuple[float, float]

    def value(self, x: Optional[float] = None) -> float:
        c3, c2, c1, c0 = self.coefficients
        x = self.root if x is None else x
        return ((c3 * x + c2) * x + c1) * x + c0

    def scale(self) -> float:
        """Largest monomial magnitude at the root."""
        c3, c2, c1, c0 = self.coefficients
        x = abs(self.root)
        return max(abs(c3) * x ** 3, abs(c2) * x ** 2, abs(c1) * x, abs(c0))


def relative_residual(forward: Sequence[float], target: Sequence[float]) -> float:
    """
    Largest componentwise relative error. Components below RESIDUAL_FLOOR
    times the largest are measured against that floor instead.
    """
    floor = RESIDUAL_FLOOR * max(abs(t) for t in target)
    return max(abs(f - t) / max(abs(t), floor) for f, t in zip(forward, target))


def _reconstruction(sides: TriangleSides, forward: Callable[[TriangleSides], Triple],
                    target: Triple, auxiliary: Optional[float] = None) -> Reconstruction:
    residual = relative_residual(forward(sides), target)
    if residual >= RESIDUAL_LIMIT:
        logger.warning("Reconstruction of %s has residual %.3e", target, residual)
    return Reconstruction(sides, auxiliary, residual)


def _require_positive(u: float, v: float, w: float):
    if not (u > 0.0 and v > 0.0 and w > 0.0):
        raise NoTriangleError(f"element triple {(u, v, w)} must be positive")


def solve_cubic_in_bracket(coefficients: Tuple[float, float, float, float],
                           lo: float, hi: float, polish_steps: int = 3) -> CubicRoot:
    """
    Root of c3 x^3 + c2 x^2 + c1 x + c0 on [lo, hi].

    Brent's method on the sign change, then Newton steps that are kept only
    while they stay in the bracket and shrink the residual.

    Args:
        coefficients: (c3, c2, c1, c0)
        lo: Lower end of the bracket
        hi: Upper end of the bracket
        polish_steps: Newton steps after bracketing

    Returns:
        CubicRoot
    """
    c3, c2, c1, c0 = coefficients

    def poly(x: float) -> float:
        return ((c3 * x + c2) * x + c1) * x + c0

    def slope(x: float) -> float:
        return (3.0 * c3 * x + 2.0 * c2) * x + c1

    f_lo, f_hi = poly(lo), poly(hi)
    if f_lo == 0.0:
        return CubicRoot(coefficients, lo, (lo, hi))
    if f_hi == 0.0:
        return CubicRoot(coefficients, hi, (lo, hi))
    if f_lo * f_hi > 0.0:
        raise RootBracketError(
            f"no sign change for {coefficients} on [{lo}, {hi}]: f={f_lo:.3e}, {f_hi:.3e}")

    root = brentq(poly, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps, maxiter=500)
    for _ in range(polish_steps):
        d = slope(root)
        if d == 0.0:
            break
        candidate = root - poly(root) / d
        if not lo <= candidate <= hi or abs(poly(candidate)) >= abs(poly(root)):
            break
        root = candidate
    return CubicRoot(coefficients, root, (lo, hi))


def solve_from_medians(u: float, v: float, w: float) -> Reconstruction:
    """
    Triangle with medians (u, v, w): a^2 = (4/9)(2(v^2 + w^2) - u^2).

    Raises:
        NoTriangleError: unless u + v + w > 2 max(u, v, w)
    """
    _require_positive(u, v, w)
    if not u + v + w > 2.0 * max(u, v, w):
        raise NoTriangleError(f"medians {(u, v, w)} fail u + v + w > 2 max")
    u2, v2, w2 = u * u, v * v, w * w
    sides = TriangleSides(
        2.0 / 3.0 * math.sqrt(2.0 * (v2 + w2) - u2),
        2.0 / 3.0 * math.sqrt(2.0 * (u2 + w2) - v2),
        2.0 / 3.0 * math.sqrt(2.0 * (u2 + v2) - w2),
    )
    return _reconstruction(sides, medians, (u, v, w))


def solve_from_altitudes(u: float, v: float, w: float) -> Reconstruction:
    """Sides proportional to (1/u, 1/v, 1/w), scaled by 1/(2 S)."""
    _require_positive(u, v, w)
    p, q, r = 1.0 / u, 1.0 / v, 1.0 / w
    if not p + q + r > 2.0 * max(p, q, r):
        raise NoTriangleError(f"altitudes {(u, v, w)}: reciprocals fail the triangle inequality")
    shape = TriangleSides(p, q, r)
    sides = shape.scaled(1.0 / (2.0 * area(shape)))
    return _reconstruction(sides, altitudes, (u, v, w))


def solve_from_exradii(u: float, v: float, w: float) -> Reconstruction:
    """a = u(v + w) / sqrt(uv + vw + wu) and its rotations; always succeeds."""
    _require_positive(u, v, w)
    q = math.sqrt(u * v + v * w + w * u)
    sides = TriangleSides(u * (v + w) / q, v * (u + w) / q, w * (u + v) / q)
    return _reconstruction(sides, exradii, (u, v, w))


def circumcenter_sum_identity(u: float, v: float, w: float, radius: float) -> float:
    """Gap in u + v + w = R + sqrt(2(R - u)(R - v)(R - w)/R)."""
    inner = 2.0 * (radius - u) * (radius - v) * (radius - w) / radius
    return u + v + w - radius - math.sqrt(max(inner, 0.0))


def _sides_from_radius(u: float, v: float, w: float, radius: float) -> TriangleSides:
    r2 = radius * radius
    return TriangleSides(2.0 * math.sqrt(max(r2 - u * u, 0.0)),
                         2.0 * math.sqrt(max(r2 - v * v, 0.0)),
                         2.0 * math.sqrt(max(r2 - w * w, 0.0)))


def _circumradius_root(u: float, v: float, w: float, branch: Branch) -> CubicRoot:
    sigma = u * u + v * v + w * w
    top = max(u, v, w)
    if branch is Branch.ACUTE:
        # R^3 - sigma R - 2uvw is negative at max, non-negative at 2 omega and increasing past max
        omega = math.sqrt(sigma / 3.0)
        return solve_cubic_in_bracket((1.0, 0.0, -sigma, -2.0 * u * v * w), top, 2.0 * omega * (1.0 + 1e-12))
    # R^3 - sigma R + 2uvw is -max (difference of the others)^2 at max, 2uvw at sqrt(sigma)
    try:
        return solve_cubic_in_bracket((1.0, 0.0, -sigma, 2.0 * u * v * w), top, math.sqrt(sigma))
    except RootBracketError as e:
        raise NoTriangleError(f"distances {(u, v, w)} give a degenerate obtuse triangle") from e


def _circumcenter_forward(sides: TriangleSides) -> Triple:
    return circumcenter_distances(sides)


def solve_from_circumcenter_distances(u: float, v: float, w: float,
                                      branch: Branch = Branch.ACUTE) -> Reconstruction:
    """
    Triangle whose circumcenter lies at distances (u, v, w) from its sides.

    Args:
        u, v, w: Distances to sides a, b, c
        branch: ACUTE (circumcenter inside) or OBTUSE (outside, beyond the longest side)

    Returns:
        Reconstruction with the circumradius as auxiliary
    """
    _require_positive(u, v, w)
    cubic = _circumradius_root(u, v, w, branch)
    radius = cubic.root
    try:
        sides = _sides_from_radius(u, v, w, radius)
    except NoTriangleError as e:
        raise NoTriangleError(f"no {branch.value} triangle for distances {(u, v, w)}: {e}") from e
    result = _reconstruction(sides, _circumcenter_forward, (u, v, w), radius)

    if branch is Branch.ACUTE:
        gap = circumcenter_sum_identity(u, v, w, radius)
        if abs(gap) > 1e-10 * (u + v + w):
            logger.warning("Sum identity off by %.3e for distances %s", gap, (u, v, w))
    else:
        if classify(sides).kind is not TriangleKind.OBTUSE:
            logger.warning("Obtuse branch for %s produced a %s triangle",
                           (u, v, w), classify(sides).kind.value)
        candidates = circumcenter_candidates(u, v, w, branch)
        if len(candidates) > 1:
            logger.warning("Distances %s admit %d obtuse reconstructions", (u, v, w), len(candidates))
    return result


def circumcenter_candidates(u: float, v: float, w: float, branch: Branch) -> List[Reconstruction]:
    """
    Every root of the branch cubic above max(u, v, w) that rebuilds a triangle
    of the branch's kind reproducing (u, v, w).
    """
    _require_positive(u, v, w)
    sigma = u * u + v * v + w * w
    sign = -1.0 if branch is Branch.ACUTE else 1.0
    wanted = TriangleKind.ACUTE if branch is Branch.ACUTE else TriangleKind.OBTUSE
    results: List[Reconstruction] = []
    for root in np.roots([1.0, 0.0, -sigma, sign * 2.0 * u * v * w]):
        if abs(root.imag) > 1e-9 * abs(root) or root.real <= max(u, v, w):
            continue
        radius = float(root.real)
        try:
            sides = _sides_from_radius(u, v, w, radius)
        except NoTriangleError:
            continue
        residual = relative_residual(circumcenter_distances(sides), (u, v, w))
        if residual < 1e-6 and classify(sides).kind is wanted:
            results.append(Reconstruction(sides, radius, residual))
    return results


def solve_from_orthocenter_distances(u: float, v: float, w: float,
                                     branch: Branch = Branch.ACUTE) -> Reconstruction:
    """Vertex-to-orthocenter distances are twice the circumcenter-to-side ones."""
    half = solve_from_circumcenter_distances(u / 2.0, v / 2.0, w / 2.0, branch)
    return _reconstruction(half.sides, orthocenter_distances, (u, v, w), half.auxiliary)


def solve_from_incenter_distances(u: float, v: float, w: float) -> Reconstruction:
    """
    Triangle with incenter-to-vertex distances (u, v, w).

    The inradius is the positive root below min(u, v, w) of
    (2/(uvw)) r^3 + (1/u^2 + 1/v^2 + 1/w^2) r^2 - 1; then
    a = sqrt(v^2 - r^2) + sqrt(w^2 - r^2).
    """
    _require_positive(u, v, w)
    coefficients = (2.0 / (u * v * w), 1.0 / (u * u) + 1.0 / (v * v) + 1.0 / (w * w), 0.0, -1.0)
    r = solve_cubic_in_bracket(coefficients, 0.0, min(u, v, w)).root
    tu, tv, tw = (math.sqrt(max(x * x - r * r, 0.0)) for x in (u, v, w))
    sides = TriangleSides(tv + tw, tu + tw, tu + tv)
    return _reconstruction(sides, incenter_vertex_distances, (u, v, w), r)


def solve_from_cevian_triple(u: float, v: float, w: float) -> Reconstruction:
    """
    Triangle with altitude u, angle bisector v and median w from vertex A.

    The altitude foot sits at the origin with A = (0, u), the median foot at
    (delta, 0) and the bisector foot at (delta - omega, 0); B and C are at
    delta +- t with t^2 = omega delta + omega u^2 / (delta - omega).

    Raises:
        NoUniqueConstructionError: unless 0 < u < v < w
    """
    if not 0.0 < u < v < w:
        raise NoUniqueConstructionError(f"cevian triple {(u, v, w)} must satisfy 0 < h < w < m")
    delta = math.sqrt((w - u) * (w + u))
    foot = math.sqrt((v - u) * (v + u))
    omega = delta - foot
    t = math.sqrt(omega * delta + omega * u * u / foot)
    sides = TriangleSides(2.0 * t, math.hypot(delta - t, u), math.hypot(delta + t, u))
    return _reconstruction(sides, lambda s: vertex_cevians(s, 'A'), (u, v, w), t)


def cevian_acute_window(u: float, v: float) -> Optional[Tuple[float, float]]:
    """
    Open interval of medians w for which altitude u and bisector v give an
    acute triangle, or None when 2u^2 <= v^2.
    """
    denominator = 2.0 * u * u - v * v
    if denominator <= 0.0:
        return None
    radicand = v ** 4 - 3.0 * u * u * (v * v - u * u)
    lower = u * math.sqrt(max(radicand, 0.0)) / denominator
    upper = u * v * v / denominator
    return lower, upper


# --- angle bisectors -------------------------------------------------------

def _unit_triangle(z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sines and bisectors of the unit-circumradius triangle with angles
    pi * softmax(z1, z2, 0).

    Sines come from the smaller of each angle and its supplement, and
    cos((B - C)/2) from sin(min(A/2 + B, A/2 + C)), so both keep full
    relative precision when one angle approaches pi.
    """
    full = np.concatenate([z, np.zeros(z.shape[:-1] + (1,))], axis=-1)
    full = full - full.max(axis=-1, keepdims=True)
    weights = np.exp(full)
    total = weights.sum(axis=-1, keepdims=True)
    share = weights / total
    rest = (np.roll(weights, -1, axis=-1) + np.roll(weights, -2, axis=-1)) / total
    sines = np.sin(math.pi * np.minimum(share, rest))
    half = 0.5 * math.pi * share
    angle = math.pi * share
    s_a, s_b, s_c = sines[..., 0], sines[..., 1], sines[..., 2]
    a_, b_, c_ = angle[..., 0], angle[..., 1], angle[..., 2]
    bisectors = np.stack([
        2.0 * s_b * s_c / np.sin(np.minimum(half[..., 0] + b_, half[..., 0] + c_)),
        2.0 * s_a * s_c / np.sin(np.minimum(half[..., 1] + a_, half[..., 1] + c_)),
        2.0 * s_a * s_b / np.sin(np.minimum(half[..., 2] + a_, half[..., 2] + b_)),
    ], axis=-1)
    return sines, bisectors


def _unit_bisectors(z: np.ndarray) -> np.ndarray:
    return _unit_triangle(z)[1]


def _log_ratio_residual(z: np.ndarray, log_target: np.ndarray) -> np.ndarray:
    log_w = np.log(_unit_bisectors(z))
    current = log_w[..., :2] - log_w[..., 2:3]
    wanted = log_target[..., :2] - log_target[..., 2:3]
    return current - wanted


def _scaled_residual(z: np.ndarray, targets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Scale factor fitted in log space and the resulting max relative mismatch."""
    unit = _unit_bisectors(z)
    scale = np.exp(np.mean(np.log(targets) - np.log(unit), axis=-1))
    mismatch = np.max(np.abs(scale[:, None] * unit - targets) / targets, axis=-1)
    return scale, mismatch


def solve_bisector_batch(targets: np.ndarray, tol: float = BISECTOR_TOLERANCE,
                         max_iter: int = BISECTOR_MAX_ITER,
                         step: float = 1e-6) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """
    Vectorised inverse of the angle-bisector map.

    Damped Newton on the two log-ratios of the bisectors, with a
    central-difference Jacobian and a halving line search; rows whose line
    search stalls take a 0.5-damped fixed-point step instead.

    Args:
        targets: Array of shape (n, 3), positive bisector lengths
        tol: Max relative mismatch accepted
        max_iter: Iteration cap
        step: Finite-difference step in z

    Returns:
        Tuple (sides (n, 3), residual (n,), converged (n,), iterations used)
    """
    targets = np.asarray(targets, dtype=float).reshape(-1, 3)
    n = targets.shape[0]
    log_target = np.log(targets)
    z = np.zeros((n, 2))
    _, residual = _scaled_residual(z, targets)
    converged = residual < tol
    iterations = 0

    while iterations < max_iter and not converged.all():
        iterations += 1
        active = np.flatnonzero(~converged)
        za, lt = z[active], log_target[active]
        f0 = _log_ratio_residual(za, lt)
        jac = np.empty((active.size, 2, 2))
        for k in range(2):
            dz = np.zeros(2)
            dz[k] = step
            jac[:, :, k] = (_log_ratio_residual(za + dz, lt) - _log_ratio_residual(za - dz, lt)) / (2.0 * step)

        det = jac[:, 0, 0] * jac[:, 1, 1] - jac[:, 0, 1] * jac[:, 1, 0]
        ok = np.isfinite(det) & (np.abs(det) > 1e-300)
        newton = np.zeros_like(f0)
        safe_det = np.where(ok, det, 1.0)
        newton[:, 0] = -(jac[:, 1, 1] * f0[:, 0] - jac[:, 0, 1] * f0[:, 1]) / safe_det
        newton[:, 1] = -(-jac[:, 1, 0] * f0[:, 0] + jac[:, 0, 0] * f0[:, 1]) / safe_det

        norm0 = np.max(np.abs(f0), axis=-1)
        accepted = np.zeros(active.size, dtype=bool)
        new_z = za.copy()
        damping = 1.0
        for _ in range(30):
            pending = ok & ~accepted
            if not pending.any():
                break
            trial = za[pending] + damping * newton[pending]
            trial_norm = np.max(np.abs(_log_ratio_residual(trial, lt[pending])), axis=-1)
            better = np.isfinite(trial_norm) & (trial_norm < norm0[pending])
            idx = np.flatnonzero(pending)[better]
            new_z[idx] = trial[better]
            accepted[idx] = True
            damping *= 0.5

        stalled = ~accepted
        if stalled.any():
            # raising angle i shrinks bisector i, so move z_i with the excess log-ratio
            new_z[stalled] = za[stalled] + np.clip(0.5 * f0[stalled], -2.0, 2.0)

        z[active] = new_z
        _, res_active = _scaled_residual(new_z, targets[active])
        residual[active] = res_active
        converged[active] = res_active < tol

    scale, residual = _scaled_residual(z, targets)
    sines, _ = _unit_triangle(z)
    sides = 2.0 * scale[:, None] * sines
    return sides, residual, residual < tol, iterations


def solve_from_angle_bisectors(u: float, v: float, w: float, tol: float = BISECTOR_TOLERANCE,
                               max_iter: int = BISECTOR_MAX_ITER) -> Reconstruction:
    """
    Triangle with internal angle bisectors (u, v, w).

    Raises:
        IterationError: when the solver stops above tol
    """
    _require_positive(u, v, w)
    sides, residual, converged, iterations = solve_bisector_batch(np.array([[u, v, w]]), tol, max_iter)
    if not converged[0]:
        raise IterationError(f"bisector solve for {(u, v, w)} did not converge",
                             float(residual[0]), iterations)
    result = TriangleSides(*(float(s) for s in sides[0]))
    return Reconstruction(result, None, relative_residual(angle_bisectors(result), (u, v, w)))


# --- integer circumcenter solutions ----------------------------------------

def _squarefree_kernels(n: int) -> np.ndarray:
    """kernel[k] is k with every square factor divided out; kernel[0] = 0."""
    kernel = np.arange(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        square = p * p
        indices = np.arange(square, n + 1, square)
        while indices.size:
            divisible = indices[kernel[indices] % square == 0]
            kernel[divisible] //= square
            indices = divisible
    return kernel


def _circum_w(u: int, v: int, radius: int) -> Optional[int]:
    discriminant = (radius * radius - u * u) * (radius * radius - v * v)
    root = math.isqrt(discriminant)
    numerator = root - u * v
    if root * root != discriminant or numerator <= 0 or numerator % radius:
        return None
    w = numerator // radius
    if not v <= w < radius:
        return None
    if radius ** 3 - (u * u + v * v + w * w) * radius - 2 * u * v * w != 0:
        return None
    return w


def find_integer_circum_solutions(limit: int) -> List[Quadruple]:
    """
    All integer (u, v, w, R) with 1 <= u <= v <= w < R <= limit and
    R^3 - (u^2 + v^2 + w^2) R - 2uvw = 0.

    For fixed (u, v, R) the cubic is quadratic in w with discriminant
    (R^2 - u^2)(R^2 - v^2). That product is a square exactly when both
    factors share a square-free kernel, so for each R the u values are
    grouped by the kernel of (R - u)(R + u) and only pairs inside a group
    are tried. Every hit is confirmed in exact integer arithmetic.

    Args:
        limit: Largest circumradius searched

    Returns:
        Sorted list of quadruples
    """
    found: List[Quadruple] = []
    kernel = _squarefree_kernels(2 * limit)
    for radius in range(2, limit + 1):
        u = np.arange(1, radius, dtype=np.int64)
        low, high = kernel[radius - u], kernel[radius + u]
        common = np.gcd(low, high)
        key = (low // common) * (high // common)

        # u == v: the discriminant is (R^2 - u^2)^2 and w = (R^2 - 2u^2) / R
        numerator = radius * radius - 2 * u * u
        equal = (numerator > 0) & (numerator % radius == 0)
        for uu in u[equal].tolist():
            w = _circum_w(uu, uu, radius)
            if w is not None:
                found.append((uu, uu, w, radius))

        order = np.argsort(key, kind='stable')
        ordered = key[order]
        starts = np.flatnonzero(np.r_[True, ordered[1:] != ordered[:-1]])
        stops = np.r_[starts[1:], ordered.size]
        for start, stop in zip(starts.tolist(), stops.tolist()):
            if stop - start < 2:
                continue
            group = u[order[start:stop]].tolist()
            for i, uu in enumerate(group):
                for vv in group[i + 1:]:
                    w = _circum_w(uu, vv, radius)
                    if w is not None:
                        found.append((uu, vv, w, radius))
    found.sort(key=lambda q: (q[3], q[0], q[1], q[2]))

    missing = set(pell_family_solutions(limit)) - set(found)
    if missing:
        logger.error("Integer search missed family members %s", sorted(missing))
    return found


def pell_family_solutions(limit: int) -> List[Quadruple]:
    """
    Solutions of the form R = uv with (u^2 - 1)(v^2 - 1) = (w + 1)^2.
    """
    found: List[Quadruple] = []
    u = 2
    while u * u <= limit:
        for v in range(u, limit // u + 1):
            product = (u * u - 1) * (v * v - 1)
            root = math.isqrt(product)
            if root * root != product:
                continue
            w, radius = root - 1, u * v
            if v <= w < radius:
                found.append((u, v, w, radius))
        u += 1
    found.sort(key=lambda q: (q[3], q[0], q[1], q[2]))
    return found


# Quadruples (u, v, w, R) listed in the published table of integer solutions.
PUBLISHED_INTEGER_SOLUTIONS: List[Quadruple] = [
    (1, 13, 22, 26), (2, 7, 11, 14), (2, 9, 12, 16), (3, 14, 25, 30),
    (4, 14, 22, 28), (4, 18, 24, 32), (6, 11, 14, 21), (7, 19, 25, 35),
    (8, 17, 22, 32), (11, 17, 21, 33), (11, 19, 26, 38), (12, 22, 28, 42),
]
