"""Point universes with pluggable distortion functions.

A space pairs a point representation with a symmetric distortion
d : X x X -> [0, inf) satisfying d(x, x) = 0.  Five kinds are supported:

* ``euclidean``         vectors in R^D, 2-norm
* ``lp``                vectors in R^D, p-norm (p >= 1)
* ``discrete``          symbols, d(x, y) = 1 whenever x != y
* ``precomputed``       integer indices into a fixed square distance matrix
* ``scaled_indicator``  non-negative scalars a, b with d(a, b) = |a - b|^(1/p),
                        the distance between step functions 1_[0,a] and 1_[0,b]
                        under the L_p norm

All built-in kinds are true metrics.  A precomputed matrix is only required
to be symmetric, non-negative and zero on the diagonal; callers supplying
one are responsible for the triangle inequality where an algorithm's
certificate depends on it (see :mod:`metricmass.separation`).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

EUCLIDEAN = "euclidean"
LP = "lp"
DISCRETE = "discrete"
PRECOMPUTED = "precomputed"
SCALED_INDICATOR = "scaled_indicator"


class DimensionError(ValueError):
    """Point does not match the dimensionality or representation of a space."""


@dataclass(frozen=True)
class MetricSpace:
    kind: str
    dim: int | None = None
    p: float | None = None
    matrix: np.ndarray | None = field(default=None, repr=False, compare=False)

    # -- point canonicalization ------------------------------------------

    def as_points(self, points) -> np.ndarray:
        """Canonicalize an array-like of points, validating shape and range."""
        if self.kind in (EUCLIDEAN, LP):
            arr = np.atleast_2d(np.asarray(points, dtype=float))
            if arr.ndim != 2 or arr.shape[1] != self.dim:
                raise DimensionError(
                    f"expected points of dimension {self.dim}, got shape {arr.shape}"
                )
            return arr
        if self.kind == DISCRETE:
            arr = np.asarray(points)
            if arr.ndim != 1:
                raise DimensionError("discrete points must be a flat sequence of symbols")
            return arr
        if self.kind == PRECOMPUTED:
            arr = np.asarray(points, dtype=int)
            if arr.ndim != 1:
                raise DimensionError("precomputed points must be a flat index sequence")
            n = self.matrix.shape[0]
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise DimensionError(f"index out of range for {n}x{n} distance matrix")
            return arr
        if self.kind == SCALED_INDICATOR:
            arr = np.asarray(points, dtype=float).reshape(-1)
            if arr.size and arr.min() < 0:
                raise DimensionError("scaled-indicator points must be non-negative reals")
            return arr
        raise ValueError(f"unknown space kind {self.kind!r}")

    def as_point(self, point) -> np.ndarray:
        """Canonicalize a single point to a length-1 batch."""
        if self.kind in (EUCLIDEAN, LP):
            arr = np.asarray(point, dtype=float).reshape(-1)
            if arr.shape[0] != self.dim:
                raise DimensionError(
                    f"expected a point of dimension {self.dim}, got {arr.shape[0]}"
                )
            return arr[None, :]
        return self.as_points([point] if np.isscalar(point) or self.kind == DISCRETE else point)

    # -- distances ---------------------------------------------------------

    def cross_distances(self, a, b) -> np.ndarray:
        """|a| x |b| matrix of distances between two point batches."""
        a = self.as_points(a)
        b = self.as_points(b)
        if self.kind == EUCLIDEAN:
            return cdist(a, b)
        if self.kind == LP:
            return cdist(a, b, "minkowski", p=self.p)
        if self.kind == DISCRETE:
            return (a[:, None] != b[None, :]).astype(float)
        if self.kind == PRECOMPUTED:
            return self.matrix[np.ix_(a, b)]
        if self.kind == SCALED_INDICATOR:
            return np.abs(a[:, None] - b[None, :]) ** (1.0 / self.p)
        raise ValueError(f"unknown space kind {self.kind!r}")

    def pairwise_distances(self, points) -> np.ndarray:
        return self.cross_distances(points, points)

    def distance(self, x, y) -> float:
        return float(self.cross_distances(self.as_point(x), self.as_point(y))[0, 0])


def euclidean(dim: int) -> MetricSpace:
    if dim < 1:
        raise ValueError("dimension must be a positive integer")
    return MetricSpace(EUCLIDEAN, dim=int(dim))


def lp(dim: int, p: float) -> MetricSpace:
    if dim < 1:
        raise ValueError("dimension must be a positive integer")
    if p < 1:
        raise ValueError("p-norms require p >= 1")
    return MetricSpace(LP, dim=int(dim), p=float(p))


def discrete() -> MetricSpace:
    return MetricSpace(DISCRETE)


def precomputed(matrix) -> MetricSpace:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("distance matrix must be square")
    if not np.allclose(np.diag(m), 0.0):
        raise ValueError("distance matrix must have a zero diagonal")
    if not np.allclose(m, m.T):
        raise ValueError("distance matrix must be symmetric")
    if m.min() < 0:
        raise ValueError("distance matrix must be non-negative")
    return MetricSpace(PRECOMPUTED, dim=None, matrix=m)


def scaled_indicator(p: float) -> MetricSpace:
    if p < 1:
        raise ValueError("scaled-indicator exponent requires p >= 1")
    return MetricSpace(SCALED_INDICATOR, dim=1, p=float(p))


def ball_contains(space: MetricSpace, center, r: float, y) -> bool:
    """Whether y lies in the closed ball B(center, r) = {y : d(center, y) <= r}."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    return space.distance(center, y) <= r
