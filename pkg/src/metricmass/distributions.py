"""Synthetic distribution generators, including the adversarial constructions.

Every generator is deterministic given (spec, seed).  Finite-support specs
additionally expose their atom list, weights and atom-to-atom distances,
which the oracles use for exact computation; samples drawn through
:func:`draw_sample` carry their atom indices as provenance for the same
purpose.

The basis-plus-atom family is the construction showing that no universal
estimator of the expected missing mass exists: a mixture of uniform mass on
D canonical basis vectors with a small atom at the origin, weighted so the
atom appears in an n-point sample with probability exactly 1/2.  With
1 < r < sqrt(2) the conditional missing mass collapses to zero when the
origin is drawn and stays near one otherwise, forcing variance close to the
maximum 1/4 once D is large against n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .samples import Sample
from .spaces import (
    MetricSpace,
    discrete,
    euclidean,
    scaled_indicator,
)


def rng_from_seed(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _cached(spec, name: str, build):
    value = spec.__dict__.get(name)
    if value is None:
        value = build()
        object.__setattr__(spec, name, value)
    return value


class _FiniteSupportMixin:
    """Shared machinery for distributions with finitely many atoms."""

    def atom_count(self) -> int:
        return len(self.atom_weights())

    def sample_indices(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.choice(self.atom_count(), size=count, p=self.atom_weights())

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return self.points_from_indices(self.sample_indices(count, rng))


@dataclass(frozen=True)
class DiscreteSpec(_FiniteSupportMixin):
    """Finitely many symbols under the discrete metric."""
    symbols: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(self.symbols) != len(w) or len(w) == 0:
            raise ValueError("symbols and weights must be non-empty and aligned")
        if w.min() < 0:
            raise ValueError("weights must be non-negative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")

    kind = "discrete"

    def space(self) -> MetricSpace:
        return discrete()

    def atom_weights(self) -> np.ndarray:
        return _cached(self, "_weights", lambda: np.asarray(self.weights, dtype=float))

    def atom_points(self) -> np.ndarray:
        return np.asarray(self.symbols)

    def points_from_indices(self, idx) -> np.ndarray:
        return self.atom_points()[np.asarray(idx, dtype=int)]

    def atom_distance_matrix(self) -> np.ndarray:
        k = len(self.symbols)
        return _cached(self, "_dmat", lambda: 1.0 - np.eye(k))


def discrete_uniform(k: int) -> DiscreteSpec:
    syms = tuple(f"s{i}" for i in range(k))
    return DiscreteSpec(syms, tuple([1.0 / k] * k))


def discrete_zipf(k: int) -> DiscreteSpec:
    w = np.array([1.0 / (i + 1) for i in range(k)])
    w /= w.sum()
    syms = tuple(f"s{i}" for i in range(k))
    return DiscreteSpec(syms, tuple(w))


@dataclass(frozen=True)
class PointMassSpec(_FiniteSupportMixin):
    """Finitely many atoms at explicit coordinates in euclidean space."""
    points: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(self.points) != len(w) or len(w) == 0:
            raise ValueError("points and weights must be non-empty and aligned")
        if w.min() < 0:
            raise ValueError("weights must be non-negative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        dims = {len(p) for p in self.points}
        if len(dims) != 1:
            raise ValueError("all atoms must share one dimension")

    kind = "point_mass"

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def space(self) -> MetricSpace:
        return euclidean(self.dim)

    def atom_weights(self) -> np.ndarray:
        return _cached(self, "_weights", lambda: np.asarray(self.weights, dtype=float))

    def atom_points(self) -> np.ndarray:
        return _cached(self, "_points", lambda: np.asarray(self.points, dtype=float))

    def points_from_indices(self, idx) -> np.ndarray:
        return self.atom_points()[np.asarray(idx, dtype=int)]

    def atom_distance_matrix(self) -> np.ndarray:
        return _cached(self, "_dmat",
                       lambda: self.space().pairwise_distances(self.atom_points()))


@dataclass(frozen=True)
class SphereAtomSpec(_FiniteSupportMixin):
    """Uniform mass on the canonical basis of R^dim mixed with an atom at the
    origin, weighted so that an n_design-point sample misses the origin with
    probability exactly 1/2."""
    dim: int
    n_design: int
    r_design: float = 1.2

    def __post_init__(self):
        if self.dim < 1 or self.n_design < 1:
            raise ValueError("dim and n_design must be positive")
        if not 1.0 < self.r_design < math.sqrt(2.0):
            raise ValueError("r_design must lie strictly between 1 and sqrt(2)")

    kind = "sphere_atom"

    @property
    def atom_weight(self) -> float:
        return 1.0 - 0.5 ** (1.0 / self.n_design)

    def space(self) -> MetricSpace:
        return euclidean(self.dim)

    def atom_weights(self) -> np.ndarray:
        def build():
            w = np.full(self.dim + 1, 0.5 ** (1.0 / self.n_design) / self.dim)
            w[0] = self.atom_weight
            return w
        return _cached(self, "_weights", build)

    def atom_points(self) -> np.ndarray:
        def build():
            pts = np.zeros((self.dim + 1, self.dim))
            pts[1:] = np.eye(self.dim)
            return pts
        return _cached(self, "_points", build)

    def points_from_indices(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=int)
        pts = np.zeros((len(idx), self.dim))
        basis = idx > 0
        pts[np.arange(len(idx))[basis], idx[basis] - 1] = 1.0
        return pts

    def atom_distance_matrix(self) -> np.ndarray:
        def build():
            k = self.dim + 1
            m = np.full((k, k), math.sqrt(2.0))
            m[0, :] = 1.0
            m[:, 0] = 1.0
            np.fill_diagonal(m, 0.0)
            return m
        return _cached(self, "_dmat", build)


@dataclass(frozen=True)
class BasisUniformSpec(_FiniteSupportMixin):
    """Uniform distribution over the canonical basis vectors of R^dim."""
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")

    kind = "basis_uniform"

    def space(self) -> MetricSpace:
        return euclidean(self.dim)

    def atom_weights(self) -> np.ndarray:
        return _cached(self, "_weights",
                       lambda: np.full(self.dim, 1.0 / self.dim))

    def atom_points(self) -> np.ndarray:
        return _cached(self, "_points", lambda: np.eye(self.dim))

    def points_from_indices(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=int)
        pts = np.zeros((len(idx), self.dim))
        pts[np.arange(len(idx)), idx] = 1.0
        return pts

    def atom_distance_matrix(self) -> np.ndarray:
        def build():
            m = np.full((self.dim, self.dim), math.sqrt(2.0))
            np.fill_diagonal(m, 0.0)
            return m
        return _cached(self, "_dmat", build)


@dataclass(frozen=True)
class UniformIntervalSpec:
    """Uniform distribution on [a, b] as a one-dimensional euclidean space."""
    a: float
    b: float

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("interval requires b > a")

    kind = "uniform_interval"

    def space(self) -> MetricSpace:
        return euclidean(1)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.a, self.b, size=(count, 1))

    # 1-D distribution interface used by the oracles:

    def coord_values(self, sample: Sample) -> np.ndarray:
        return np.asarray(sample.points, dtype=float).reshape(-1)

    def coord_halfwidth(self, r: float) -> float:
        # A metric ball of radius r is the coordinate interval of halfwidth r.
        return r

    def cdf(self, x: float) -> float:
        return float(np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0))

    def cdf_integral(self, lo: float, hi: float) -> float:
        """Integral of the CDF over [lo, hi] (exact, piecewise)."""
        if hi <= lo:
            return 0.0
        a, b = self.a, self.b
        total = 0.0
        # Below a the CDF is 0; above b it is 1; linear in between.
        mid_lo, mid_hi = max(lo, a), min(hi, b)
        if mid_hi > mid_lo:
            f_lo = (mid_lo - a) / (b - a)
            f_hi = (mid_hi - a) / (b - a)
            total += 0.5 * (f_lo + f_hi) * (mid_hi - mid_lo)
        if hi > b:
            total += hi - max(lo, b)
        return total


@dataclass(frozen=True)
class ScaledIndicatorSpec:
    """Step functions 1_[0, X] with X exponential, represented by the scalar
    X under the distance |a - b|^(1/p); the support of this distribution is
    unbounded and not contained in any finite-dimensional subspace, yet the
    local-separation statistic stays at most 2^p + 1."""
    p: float
    rate: float = 1.0

    def __post_init__(self):
        if self.p <= 1.0:
            raise ValueError("the embedding exponent requires p > 1")
        if self.rate <= 0:
            raise ValueError("rate must be positive")

    kind = "scaled_indicator"

    def space(self) -> MetricSpace:
        return scaled_indicator(self.p)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.exponential(scale=1.0 / self.rate, size=count)

    def coord_values(self, sample: Sample) -> np.ndarray:
        return np.asarray(sample.points, dtype=float).reshape(-1)

    def coord_halfwidth(self, r: float) -> float:
        # d(a, b) <= r means |a - b| <= r^p in coordinate units.
        return r ** self.p

    def cdf(self, x: float) -> float:
        return 0.0 if x < 0 else 1.0 - math.exp(-self.rate * x)

    def cdf_integral(self, lo: float, hi: float) -> float:
        if hi <= lo:
            return 0.0
        lo = max(lo, 0.0)
        if hi <= lo:
            return 0.0
        # Antiderivative of 1 - exp(-rate x) is x + exp(-rate x)/rate.
        anti = lambda x: x + math.exp(-self.rate * x) / self.rate
        return anti(hi) - anti(lo)


@dataclass(frozen=True)
class LowdimEmbeddingSpec:
    """A Gaussian mixture supported on a d_intrinsic-dimensional coordinate
    subspace, zero-padded into ambient dimension.  Components sit at the
    origin and at spread * e_j for each intrinsic axis, with equal weights."""
    d_intrinsic: int
    d_ambient: int
    spread: float = 2.0
    component_std: float = 0.5

    def __post_init__(self):
        if self.d_intrinsic < 1 or self.d_ambient < self.d_intrinsic:
            raise ValueError("need 1 <= d_intrinsic <= d_ambient")
        if self.component_std <= 0:
            raise ValueError("component_std must be positive")

    kind = "lowdim_embedding"

    def space(self) -> MetricSpace:
        return euclidean(self.d_ambient)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        k = self.d_intrinsic + 1
        comp = rng.integers(0, k, size=count)
        pts = np.zeros((count, self.d_ambient))
        noise = rng.normal(0.0, self.component_std, size=(count, self.d_intrinsic))
        pts[:, : self.d_intrinsic] = noise
        shifted = comp > 0
        pts[np.arange(count)[shifted], comp[shifted] - 1] += self.spread
        return pts


DistributionSpec = (
    DiscreteSpec | PointMassSpec | SphereAtomSpec | BasisUniformSpec
    | UniformIntervalSpec | ScaledIndicatorSpec | LowdimEmbeddingSpec
)


def is_finite_support(spec) -> bool:
    return isinstance(spec, _FiniteSupportMixin)


def has_scalar_cdf(spec) -> bool:
    return isinstance(spec, (UniformIntervalSpec, ScaledIndicatorSpec))


def sample_points(spec, count: int, seed) -> np.ndarray:
    """iid draws from the distribution; deterministic given the seed."""
    if count < 1:
        raise ValueError("count must be positive")
    return spec.sample(count, rng_from_seed(seed))


def draw_sample(spec, count: int, seed) -> Sample:
    """Draw an ordered sample wrapped with its space; finite-support specs
    attach atom-index provenance for exact oracle evaluation."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = rng_from_seed(seed)
    if is_finite_support(spec):
        idx = spec.sample_indices(count, rng)
        return Sample(spec.points_from_indices(idx), spec.space(), atom_indices=idx)
    return Sample(spec.sample(count, rng), spec.space())


def indicator_process(p: float, count: int, seed, rate: float = 1.0) -> np.ndarray:
    """Draws of the step-function embedding: non-negative scalars under the
    scaled-indicator(p) distance."""
    return sample_points(ScaledIndicatorSpec(p=p, rate=rate), count, seed)


def adversarial_pair(n: int, epsilon: float, r: float
                     ) -> tuple[SphereAtomSpec, BasisUniformSpec]:
    """The indistinguishable pair defeating estimation of the expected
    missing mass at scale r.

    The two distributions agree conditionally on the origin atom never being
    drawn, yet their expected missing masses differ by at least
    (1 - epsilon)/2.  The ambient dimension starts at ceil(2n/epsilon) and
    doubles until the birthday condition n^2/(D - n) <= epsilon holds, which
    keeps the all-distinct-basis-vectors event probable.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 1.0 < r < math.sqrt(2.0):
        raise ValueError("the construction requires 1 < r < sqrt(2)")
    if n < math.log(4.0) / epsilon:
        raise ValueError("n must be at least ln(4)/epsilon")
    d = max(int(math.ceil(2.0 * n / epsilon)), n + 1)
    while n * n / (d - n) > epsilon:
        d *= 2
    return SphereAtomSpec(dim=d, n_design=n, r_design=r), BasisUniformSpec(dim=d)


# -- serialization -----------------------------------------------------------

def spec_to_dict(spec) -> dict:
    if isinstance(spec, DiscreteSpec):
        return {"kind": spec.kind, "symbols": list(spec.symbols),
                "weights": list(spec.weights)}
    if isinstance(spec, PointMassSpec):
        return {"kind": spec.kind, "points": [list(p) for p in spec.points],
                "weights": list(spec.weights)}
    if isinstance(spec, SphereAtomSpec):
        return {"kind": spec.kind, "dim": spec.dim, "n_design": spec.n_design,
                "r_design": spec.r_design}
    if isinstance(spec, BasisUniformSpec):
        return {"kind": spec.kind, "dim": spec.dim}
    if isinstance(spec, UniformIntervalSpec):
        return {"kind": spec.kind, "a": spec.a, "b": spec.b}
    if isinstance(spec, ScaledIndicatorSpec):
        return {"kind": spec.kind, "p": spec.p, "rate": spec.rate}
    if isinstance(spec, LowdimEmbeddingSpec):
        return {"kind": spec.kind, "d_intrinsic": spec.d_intrinsic,
                "d_ambient": spec.d_ambient, "spread": spec.spread,
                "component_std": spec.component_std}
    raise ValueError(f"unknown distribution spec {type(spec)!r}")


def spec_from_dict(payload: dict):
    kind = payload.get("kind")
    body = {k: v for k, v in payload.items() if k != "kind"}
    if kind == "discrete":
        return DiscreteSpec(tuple(body["symbols"]), tuple(body["weights"]))
    if kind == "point_mass":
        return PointMassSpec(tuple(tuple(p) for p in body["points"]),
                             tuple(body["weights"]))
    if kind == "sphere_atom":
        return SphereAtomSpec(**body)
    if kind == "basis_uniform":
        return BasisUniformSpec(**body)
    if kind == "uniform_interval":
        return UniformIntervalSpec(**body)
    if kind == "scaled_indicator":
        return ScaledIndicatorSpec(**body)
    if kind == "lowdim_embedding":
        return LowdimEmbeddingSpec(**body)
    raise ValueError(f"unknown distribution kind {kind!r}")
