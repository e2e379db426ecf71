"""
Seeded Monte Carlo over the model triangle.

The index range is cut into fixed counter blocks; each block is tallied
independently and the tallies are summed in index order, so the estimate
depends only on (seed, n, sampler) and never on the number of workers.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Tuple

import numpy as np

from config.config import CHUNK_SIZE, DEFAULT_WORKERS
from src.elements import TriangleSides, vertex_coordinates
from src.model import SampleStream, SamplerKind, chunk_points, chunk_uniforms, points_to_triples
from src.predicates import (
    EventDescriptor,
    evaluate,
    general_triangle_distances,
    sides_acute_mask,
    sides_exists_mask,
)
from src.probability.models import Method, ProbabilityEstimate

logger = logging.getLogger(__name__)

Segment = Tuple[int, int, int]  # chunk index, first row, stop row


def _segments(start: int, count: int) -> List[Segment]:
    stop = start + count
    segments = []
    for chunk in range(start // CHUNK_SIZE, (stop - 1) // CHUNK_SIZE + 1):
        lo = max(start - chunk * CHUNK_SIZE, 0)
        hi = min(stop - chunk * CHUNK_SIZE, CHUNK_SIZE)
        segments.append((chunk, lo, hi))
    return segments


def _tally(segments: List[Segment], count_segment: Callable[[Segment], Tuple[int, int]],
           workers: int) -> Tuple[int, int]:
    if workers <= 1:
        tallies = [count_segment(segment) for segment in segments]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            tallies = list(executor.map(count_segment, segments))
    hits = sum(t[0] for t in tallies)
    failures = sum(t[1] for t in tallies)
    return hits, failures


def _estimate(hits: int, valid: int) -> Tuple[float, float]:
    if valid == 0:
        return 0.0, 0.0
    p = hits / valid
    return p, math.sqrt(p * (1.0 - p) / valid)


def monte_carlo(event: EventDescriptor, n: int, stream: SampleStream,
                workers: int = DEFAULT_WORKERS) -> ProbabilityEstimate:
    """
    Frequency of an event over n model samples.

    Samples on which a solver-backed predicate fails are counted in
    `failures` and left out of the denominator.

    Args:
        event: Event to estimate
        n: Number of samples, at least 1
        stream: Seed, first counter and sampler
        workers: Threads evaluating counter blocks

    Returns:
        ProbabilityEstimate with the binomial standard error
    """
    if n < 1:
        raise ValueError(f"sample count must be at least 1, got {n}")

    def count_segment(segment: Segment) -> Tuple[int, int]:
        chunk, lo, hi = segment
        x, y = chunk_points(stream.seed, stream.sampler_kind, chunk)
        alpha, beta, gamma = points_to_triples(x[lo:hi], y[lo:hi])
        mask, failed = evaluate(event, alpha, beta, gamma)
        return int(np.count_nonzero(mask & ~failed)), int(np.count_nonzero(failed))

    hits, failures = _tally(_segments(stream.counter, n), count_segment, workers)
    if failures:
        logger.warning("%s: %d of %d samples failed to reconstruct", event, failures, n)
    value, error = _estimate(hits, n - failures)
    return ProbabilityEstimate(event, value, Method.MONTE_CARLO, error, n=n, seed=stream.seed,
                               failures=failures, sampler=stream.sampler_kind.value)


def general_triangle_monte_carlo(T: TriangleSides, n: int, seed: int, acute: bool = False,
                                 workers: int = DEFAULT_WORKERS) -> ProbabilityEstimate:
    """
    Chance that the distances from a uniform interior point of T to its sides
    form a triangle (an acute one when `acute`).
    """
    if n < 1:
        raise ValueError(f"sample count must be at least 1, got {n}")
    (ax, ay), _, (cx, _) = vertex_coordinates(T)
    mask_function = sides_acute_mask if acute else sides_exists_mask

    def count_segment(segment: Segment) -> Tuple[int, int]:
        chunk, lo, hi = segment
        uniforms = chunk_uniforms(seed, SamplerKind.DIRECT, chunk)[lo:hi]
        u, v = uniforms[:, 0], uniforms[:, 1]
        fold = u + v > 1.0
        u = np.where(fold, 1.0 - u, u)
        v = np.where(fold, 1.0 - v, v)
        # B + u (A - B) + v (C - B) with B at the origin
        x = u * ax + v * cx
        y = u * ay
        return int(np.count_nonzero(mask_function(*general_triangle_distances(T, x, y)))), 0

    hits, _ = _tally(_segments(0, n), count_segment, workers)
    value, error = _estimate(hits, n)
    return ProbabilityEstimate(None, value, Method.MONTE_CARLO, error, n=n, seed=seed,
                               sampler=SamplerKind.DIRECT.value)
