"""
Sampling model for the broken stick.

A uniform point in the equilateral triangle with vertices A=(1,0), B=(-1,0),
C=(0,sqrt(3)) has distances to the three sides that are the three parts of a
stick of length sqrt(3) broken at two uniform points.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Tuple

import numpy as np

from config.config import CHUNK_SIZE
from src.exceptions import ConfigError, ModelDomainError

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
MODEL_AREA = SQRT3
DOMAIN_TOLERANCE = 1e-12


class SamplerKind(Enum):
    DIRECT = 'direct'
    PARALLELOGRAM = 'parallelogram'

    @property
    def stream_id(self) -> int:
        return 0 if self is SamplerKind.DIRECT else 1


@dataclass(frozen=True)
class ModelPoint:
    x: float
    y: float

    def contains(self) -> bool:
        """True when the point lies in the closed model triangle."""
        return (self.y >= -DOMAIN_TOLERANCE
                and self.y <= SQRT3 * (1.0 + self.x) + DOMAIN_TOLERANCE
                and self.y <= SQRT3 * (1.0 - self.x) + DOMAIN_TOLERANCE)


@dataclass(frozen=True)
class StickTriple:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0.0:
            raise ModelDomainError(f"negative stick part in {self.as_tuple()}")
        if abs(self.alpha + self.beta + self.gamma - SQRT3) > DOMAIN_TOLERANCE:
            raise ModelDomainError(
                f"stick parts {self.as_tuple()} do not sum to sqrt(3)")

    @classmethod
    def normalized(cls, a: float, b: float, c: float) -> 'StickTriple':
        """Scale three non-negative proportions so they sum to sqrt(3)."""
        total = a + b + c
        if total <= 0.0:
            raise ModelDomainError("proportions must have a positive sum")
        alpha, beta = SQRT3 * a / total, SQRT3 * b / total
        return cls(alpha, beta, max(SQRT3 - alpha - beta, 0.0))

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def __iter__(self) -> Iterator[float]:
        return iter(self.as_tuple())


@dataclass(frozen=True)
class SampleStream:
    """Counter-based stream: the point at index i depends only on (seed, i, kind)."""
    seed: int
    counter: int = 0
    sampler_kind: SamplerKind = SamplerKind.DIRECT

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.counter < 0:
            raise ConfigError(f"counter must be non-negative, got {self.counter}")

    def at(self, counter: int) -> 'SampleStream':
        return SampleStream(self.seed, counter, self.sampler_kind)


def point_to_triple(p: ModelPoint) -> StickTriple:
    """
    Map a model point to its three distances to the sides.

    Args:
        p: Point inside or on the model triangle

    Returns:
        StickTriple (y, (sqrt3(1+x)-y)/2, (sqrt3(1-x)-y)/2)
    """
    if not p.contains():
        raise ModelDomainError(f"point ({p.x}, {p.y}) lies outside the model triangle")
    alpha = max(p.y, 0.0)
    beta = max((SQRT3 * (1.0 + p.x) - p.y) / 2.0, 0.0)
    gamma = max((SQRT3 * (1.0 - p.x) - p.y) / 2.0, 0.0)
    return StickTriple(alpha, beta, gamma)


def triple_to_point(t: StickTriple) -> ModelPoint:
    return ModelPoint((t.beta - t.gamma) / SQRT3, t.alpha)


def points_to_triples(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised point_to_triple without domain checks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    alpha = np.maximum(y, 0.0)
    beta = np.maximum((SQRT3 * (1.0 + x) - y) / 2.0, 0.0)
    gamma = np.maximum((SQRT3 * (1.0 - x) - y) / 2.0, 0.0)
    return alpha, beta, gamma


def inside_model(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Mask of points in the open model triangle."""
    return (y > 0.0) & (y < SQRT3 * (1.0 + x)) & (y < SQRT3 * (1.0 - x))


def direct_point(u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Fold two uniforms into a uniform point of the model triangle.

    P = C + u(A - C) + v(B - C); pairs with u + v > 1 are folded back across
    the diagonal of the parallelogram spanned at C.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    fold = u + v > 1.0
    u = np.where(fold, 1.0 - u, u)
    v = np.where(fold, 1.0 - v, v)
    return u - v, SQRT3 * (1.0 - u - v)


def parallelogram_point(s_cb: np.ndarray, s_ca: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Parallelogram-rule construction.

    R = C + s_cb (B - C) on side CB, S = C + s_ca (A - C) on side CA and
    CO = CR + CS. When O lands in the reflected copy of ABC it is replaced by
    its reflection through the origin.
    """
    s_cb = np.asarray(s_cb, dtype=float)
    s_ca = np.asarray(s_ca, dtype=float)
    x = s_ca - s_cb
    y = SQRT3 * (1.0 - s_cb - s_ca)
    outside = y < 0.0
    return np.where(outside, -x, x), np.where(outside, -y, y)


def chunk_uniforms(seed: int, sampler_kind: SamplerKind, chunk: int) -> np.ndarray:
    """Uniform pairs for one counter block, shape (CHUNK_SIZE, 2)."""
    counter = (sampler_kind.stream_id << 192) | (chunk << 128)
    bit_generator = np.random.Philox(key=seed, counter=counter)
    return np.random.Generator(bit_generator).random((CHUNK_SIZE, 2))


def chunk_points(seed: int, sampler_kind: SamplerKind, chunk: int) -> Tuple[np.ndarray, np.ndarray]:
    uniforms = chunk_uniforms(seed, sampler_kind, chunk)
    if sampler_kind is SamplerKind.DIRECT:
        return direct_point(uniforms[:, 0], uniforms[:, 1])
    return parallelogram_point(uniforms[:, 0], uniforms[:, 1])


def sample_batch(stream: SampleStream, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Points for indices stream.counter .. stream.counter + count - 1.

    Args:
        stream: Start of the range
        count: Number of points

    Returns:
        Tuple of x and y arrays
    """
    if count <= 0:
        return np.empty(0), np.empty(0)
    start = stream.counter
    stop = start + count
    xs, ys = [], []
    for chunk in range(start // CHUNK_SIZE, (stop - 1) // CHUNK_SIZE + 1):
        x, y = chunk_points(stream.seed, stream.sampler_kind, chunk)
        lo = max(start - chunk * CHUNK_SIZE, 0)
        hi = min(stop - chunk * CHUNK_SIZE, CHUNK_SIZE)
        xs.append(x[lo:hi])
        ys.append(y[lo:hi])
    return np.concatenate(xs), np.concatenate(ys)


def sample_direct(stream: SampleStream) -> ModelPoint:
    if stream.sampler_kind is not SamplerKind.DIRECT:
        raise ValueError("sample_direct needs a direct-uniform stream")
    x, y = sample_batch(stream, 1)
    return ModelPoint(float(x[0]), float(y[0]))


def sample_parallelogram(stream: SampleStream) -> ModelPoint:
    if stream.sampler_kind is not SamplerKind.PARALLELOGRAM:
        raise ValueError("sample_parallelogram needs a parallelogram stream")
    x, y = sample_batch(stream, 1)
    return ModelPoint(float(x[0]), float(y[0]))


def triangular_cell_counts(x: np.ndarray, y: np.ndarray, divisions: int = 8) -> np.ndarray:
    """
    Histogram of points over the divisions**2 congruent sub-triangles.

    Cells are found from floor(divisions * barycentric); the floors sum to
    divisions - 1 for an upward cell and divisions - 2 for a downward one.
    """
    n = divisions
    alpha, beta, gamma = points_to_triples(x, y)
    a = np.minimum(np.floor(n * alpha / SQRT3), n - 1).astype(np.int64)
    b = np.minimum(np.floor(n * beta / SQRT3), n - 1).astype(np.int64)
    c = np.minimum(np.floor(n * gamma / SQRT3), n - 1).astype(np.int64)
    up = a + b + c >= n - 1
    b = np.where(up, np.minimum(b, n - 1 - a), np.minimum(b, np.maximum(n - 2 - a, 0)))
    flat = a * n + b + np.where(up, 0, n * n)
    counts = np.bincount(flat, minlength=2 * n * n)

    rows, cols = np.meshgrid(np.arange(n), np.arange(n), indexing='ij')
    valid = np.concatenate([(rows + cols <= n - 1).ravel(), (rows + cols <= n - 2).ravel()])
    return counts[valid]
