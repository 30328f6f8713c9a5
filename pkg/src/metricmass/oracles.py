"""Ground-truth computation of the mass quantities used for validation.

The conditional missing mass of a sample is the probability, under the
generating distribution, of landing farther than r from every sample point.
It is an oracle quantity (it needs the distribution), so these routines are
what the estimators are judged against.

Three evaluation strategies, picked automatically:

* finite-support distributions: exact summation over atoms, using the
  sampled atom indices when the sample carries them (fast path) or explicit
  cross distances otherwise;
* scalar distributions with a computable CDF (uniform interval, exponential
  step-function embedding): metric balls around sample points are coordinate
  intervals, so masses reduce to exact sweeps over merged intervals;
* everything else: Monte Carlo over fresh test points with a Hoeffding
  confidence half-width sqrt(ln(2/alpha) / (2N)).

The leave-one-out average H admits one shared decomposition used by both
exact branches and Monte Carlo: a point covered by no sample ball lies in
every leave-one-out escape region, a point covered by exactly one ball lies
in precisely that one, and a point covered twice or more lies in none.
Hence H = mu(cover = 0) + mu(cover = 1)/n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import (
    PointMassSpec,
    UniformIntervalSpec,
    has_scalar_cdf,
    is_finite_support,
    rng_from_seed,
)
from .samples import Sample

ANALYTIC = "analytic"
MONTE_CARLO = "monte_carlo"

_MC_CHUNK = 8192


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    half_width: float
    method: str
    confidence: float
    n_test: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.method == ANALYTIC and self.half_width != 0.0:
            raise ValueError("analytic oracles carry no Monte Carlo width")

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "half_width": self.half_width,
            "method": self.method,
            "confidence": self.confidence,
            "n_test": self.n_test,
            "seed": self.seed,
        }


def _analytic(value: float) -> OracleEstimate:
    return OracleEstimate(float(value), 0.0, ANALYTIC, 1.0)


def _hoeffding_halfwidth(n: int, alpha: float) -> float:
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def _seed_field(seed) -> int | None:
    return int(seed) if isinstance(seed, (int, np.integer)) else None


# -- coverage decompositions -------------------------------------------------

def _finite_coverage(spec, sample: Sample, r: float) -> tuple[float, float]:
    """(mass covered by no sample ball, mass covered by exactly one)."""
    weights = spec.atom_weights()
    if sample.atom_indices is not None:
        dist = spec.atom_distance_matrix()[:, sample.atom_indices]
    else:
        dist = spec.space().cross_distances(spec.atom_points(), sample.points)
    counts = (dist <= r).sum(axis=1)
    return float(weights[counts == 0].sum()), float(weights[counts == 1].sum())


def _interval_coverage(spec, sample: Sample, r: float) -> tuple[float, float]:
    """Coverage masses for scalar distributions: balls are intervals."""
    xs = spec.coord_values(sample)
    rho = spec.coord_halfwidth(r)
    pos = np.concatenate([xs - rho, xs + rho])
    delta = np.concatenate([np.ones(len(xs)), -np.ones(len(xs))])
    order = np.lexsort((-delta, pos))
    cdf = spec.cdf
    m0 = m1 = 0.0
    count = 0
    prev = None
    for i in order:
        p = float(pos[i])
        if prev is None:
            m0 += cdf(p)
        elif p > prev:
            mass = cdf(p) - cdf(prev)
            if count == 0:
                m0 += mass
            elif count == 1:
                m1 += mass
        count += int(delta[i])
        prev = p
    m0 += 1.0 - cdf(prev)
    return m0, m1


def _mc_coverage_counts(spec, sample: Sample, r: float, n_test: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Ball-coverage count of each of n_test fresh draws, chunked."""
    space = sample.space
    counts = np.empty(n_test, dtype=np.int64)
    done = 0
    while done < n_test:
        take = min(_MC_CHUNK, n_test - done)
        pts = spec.sample(take, rng)
        d = space.cross_distances(pts, sample.points)
        counts[done:done + take] = (d <= r).sum(axis=1)
        done += take
    return counts


def _validate_mc_args(n_test: int, alpha: float) -> None:
    if n_test < 1:
        raise ValueError("n_test must be positive")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")


# -- oracle operations --------------------------------------------------------

def conditional_missing_mass(spec, sample: Sample, r: float,
                             n_test: int = 100_000, alpha: float = 0.01,
                             seed=0) -> OracleEstimate:
    """Mass of the region farther than r from every sample point."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    if sample.n < 1:
        raise ValueError("sample must be non-empty")
    if is_finite_support(spec):
        m0, _ = _finite_coverage(spec, sample, r)
        return _analytic(m0)
    if has_scalar_cdf(spec):
        m0, _ = _interval_coverage(spec, sample, r)
        return _analytic(m0)
    _validate_mc_args(n_test, alpha)
    counts = _mc_coverage_counts(spec, sample, r, n_test, rng_from_seed(seed))
    value = float((counts == 0).mean())
    return OracleEstimate(value, _hoeffding_halfwidth(n_test, alpha),
                          MONTE_CARLO, 1.0 - alpha, n_test=n_test,
                          seed=_seed_field(seed))


def smoothed_oracle_H(spec, sample: Sample, r: float,
                      n_test: int = 100_000, alpha: float = 0.01,
                      seed=0) -> OracleEstimate:
    """Average over k of the mass escaping all sample balls except the k-th.

    Sandwiched between the conditional missing mass and the same plus 1/n;
    its expectation equals that of the Good-Turing estimate.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    n = sample.n
    if n < 1:
        raise ValueError("sample must be non-empty")
    if is_finite_support(spec):
        m0, m1 = _finite_coverage(spec, sample, r)
        return _analytic(m0 + m1 / n)
    if has_scalar_cdf(spec):
        m0, m1 = _interval_coverage(spec, sample, r)
        return _analytic(m0 + m1 / n)
    _validate_mc_args(n_test, alpha)
    counts = _mc_coverage_counts(spec, sample, r, n_test, rng_from_seed(seed))
    # Per test point the leave-one-out contribution lies in [0, 1], so one
    # Hoeffding width covers the averaged statistic despite shared points.
    z = (counts == 0) + (counts == 1) / n
    return OracleEstimate(float(z.mean()), _hoeffding_halfwidth(n_test, alpha),
                          MONTE_CARLO, 1.0 - alpha, n_test=n_test,
                          seed=_seed_field(seed))


def expected_missing_mass(spec, n: int, r: float, replicates: int = 1000,
                          n_inner: int = 100_000, alpha: float = 0.01,
                          seed=0) -> OracleEstimate:
    """Expectation of the conditional missing mass over n-point samples.

    Exact for finite-support distributions: each atom escapes an n-sample
    with probability (1 - mu(B(atom, r)))^n by independence.  Otherwise an
    outer Monte Carlo over fresh samples, each evaluated by the strongest
    available inner branch.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if r < 0:
        raise ValueError("radius must be non-negative")
    if is_finite_support(spec):
        w = spec.atom_weights()
        ball_mass = ((spec.atom_distance_matrix() <= r) * w[None, :]).sum(axis=1)
        return _analytic(float((w * (1.0 - ball_mass) ** n).sum()))
    if replicates < 1:
        raise ValueError("replicates must be positive")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    from .distributions import draw_sample
    values = np.empty(replicates)
    inner_width = 0.0
    for i in range(replicates):
        sub_seed = [seed, i] if seed is not None else None
        sample = draw_sample(spec, n, sub_seed)
        est = conditional_missing_mass(spec, sample, r, n_test=n_inner,
                                       alpha=alpha, seed=sub_seed)
        values[i] = est.value
        inner_width = max(inner_width, est.half_width)
    half_width = _hoeffding_halfwidth(replicates, alpha) + inner_width
    return OracleEstimate(float(values.mean()), half_width, MONTE_CARLO,
                          1.0 - alpha, n_test=replicates,
                          seed=_seed_field(seed))


# -- exact 1-D Wasserstein -----------------------------------------------------

def exact_wasserstein_1d(spec, sample: Sample) -> float:
    """W1 distance between a one-dimensional distribution and the empirical
    measure of the sample, computed as the exact area between the two CDFs."""
    if sample.space.kind != "euclidean" or sample.space.dim != 1:
        raise ValueError("exact W1 is implemented for 1-D euclidean samples only")
    xs = np.sort(np.asarray(sample.points, dtype=float).reshape(-1))
    n = len(xs)
    if isinstance(spec, UniformIntervalSpec):
        extra = np.array([spec.a, spec.b])
    elif isinstance(spec, PointMassSpec) and spec.dim == 1:
        extra = spec.atom_points().reshape(-1)
    else:
        raise ValueError("unsupported distribution for the exact 1-D oracle")
    knots = np.unique(np.concatenate([xs, extra]))
    total = 0.0
    for left, right in zip(knots[:-1], knots[1:]):
        c = np.searchsorted(xs, left, side="right") / n
        total += _piece_area(spec, float(left), float(right), float(c))
    return total


def _piece_area(spec, left: float, right: float, c: float) -> float:
    """Integral of |F - c| over (left, right) where F has no breakpoint."""
    width = right - left
    if isinstance(spec, UniformIntervalSpec):
        a, b = spec.a, spec.b
        if right <= a:
            return c * width
        if left >= b:
            return (1.0 - c) * width
        # Piece lies inside [a, b]: F is linear with slope 1/(b - a).
        f_left = (left - a) / (b - a)
        f_right = (right - a) / (b - a)
        if c <= f_left:
            return 0.5 * (f_left + f_right) * width - c * width
        if c >= f_right:
            return c * width - 0.5 * (f_left + f_right) * width
        cross = a + c * (b - a)
        lower = (c - 0.5 * (f_left + c)) * (cross - left)
        upper = (0.5 * (c + f_right) - c) * (right - cross)
        return lower + upper
    # Atomic distribution: F is constant strictly between breakpoints.
    f_mid = float(np.sum(spec.atom_weights()[spec.atom_points().reshape(-1)
                                             <= 0.5 * (left + right)]))
    return abs(f_mid - c) * width
