"""Empirical two-sided bounds on the W1 distance to the empirical measure.

Lower bound: the mass escaping every sample r-ball must travel at least r
under any transport plan, so r * Mhat(X, r) lower-bounds W1 at every radius;
callers maximize over a grid.

Upper bounds hold with probability 1 - delta in spaces of diameter at most
one, given an r-net of the sample of size m <= (n - 3)/2:

    W1 <= Mhat(X, r) + 3r + 2 sqrt(m/(n-m)) (1 + sqrt(ln(n/delta)))
    W1 <= 3r + 3 sqrt(m/(n-m)) (1 + sqrt(ln(2n/delta)))

The true diameter of the support is unknown, so the grid sweep normalizes
distances by the observed sample diameter times a margin and reports the
normalization constant; the margin makes underestimation unlikely but the
caveat stands.  Failure probability is Bonferroni-split across the grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimators import martingale_upper_bound
from .oracles import conditional_missing_mass
from .samples import Sample, farthest_first_net, verify_net

DIAMETER_MARGIN = 1.05


@dataclass(frozen=True)
class WassersteinReport:
    r: float
    m: int
    delta: float
    lower: float
    upper_a: float | None
    upper_b: float | None
    net_indices: tuple[int, ...]
    scale: float = 1.0
    mhat: float | None = None

    def __post_init__(self):
        if self.lower < 0 or self.r < 0:
            raise ValueError("report fields must be non-negative")

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "m": self.m,
            "delta": self.delta,
            "lower": self.lower,
            "upper_a": self.upper_a,
            "upper_b": self.upper_b,
            "net_indices": list(self.net_indices),
            "scale": self.scale,
            "mhat": self.mhat,
        }


def w1_lower_bound(mhat: float, r: float) -> float:
    """r * Mhat, valid for every r with no failure probability."""
    if not 0.0 <= mhat <= 1.0:
        raise ValueError("mhat must lie in [0, 1]")
    if r < 0:
        raise ValueError("radius must be non-negative")
    return r * mhat


def w1_upper_bounds(sample: Sample, r: float, net, delta: float,
                    mhat_upper: float | None = None) -> WassersteinReport:
    """Evaluate both net-based upper bounds on a diameter-normalized sample.

    ``mhat_upper`` must be an upper estimate of the conditional missing mass
    at radius r (oracle value or a high-probability bound); without it only
    the net-only form is reported.  Bounds are clipped to the diameter.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if sample.diameter() > 1.0:
        raise ValueError("upper bounds need diameter <= 1; rescale the sample")
    verify_net(sample, net, r)
    n = sample.n
    m = len(net)
    if m > (n - 3) / 2:
        raise ValueError(f"net size {m} exceeds (n - 3)/2 = {(n - 3) / 2:.1f}")
    ratio = math.sqrt(m / (n - m))
    upper_b = min(1.0, 3.0 * r + 3.0 * ratio * (1.0 + math.sqrt(math.log(2.0 * n / delta))))
    upper_a = None
    if mhat_upper is not None:
        upper_a = min(1.0, mhat_upper + 3.0 * r
                      + 2.0 * ratio * (1.0 + math.sqrt(math.log(n / delta))))
    lower = w1_lower_bound(mhat_upper, r) if mhat_upper is not None else 0.0
    return WassersteinReport(r=r, m=m, delta=delta, lower=lower,
                             upper_a=upper_a, upper_b=upper_b,
                             net_indices=tuple(int(i) for i in net),
                             mhat=mhat_upper)


def default_r_grid(sample: Sample, size: int = 20) -> list[float]:
    """Logarithmic grid between the 1st percentile and the median of the
    positive pairwise distances."""
    d = sample.distance_matrix()
    iu = np.triu_indices(sample.n, k=1)
    vals = d[iu]
    vals = vals[vals > 0]
    if len(vals) == 0:
        raise ValueError("sample has no positive pairwise distance; supply a grid")
    lo = float(np.percentile(vals, 1))
    hi = float(np.median(vals))
    if lo <= 0 or hi <= lo:
        raise ValueError("degenerate pairwise distances; supply a grid")
    return list(np.geomspace(lo, hi, size))


def w1_report(sample: Sample, r_grid=None, delta: float = 0.1, mu_spec=None,
              margin: float = DIAMETER_MARGIN, seed=0) -> list[WassersteinReport]:
    """Grid sweep combining net construction, both upper bounds and the
    lower bound, with delta Bonferroni-corrected across the grid.

    When ``mu_spec`` is supplied the missing-mass plug-in comes from the
    oracle (value plus its Monte Carlo half-width); otherwise the sequential
    upper confidence bound stands in, which keeps the upper bounds valid but
    makes the reported lower bound a plug-in estimate rather than a
    certificate.  Radii whose net violates m <= (n - 3)/2 report no upper
    bounds.  All fields are in the sample's original distance units; the
    normalization constant applied for the diameter-1 hypothesis is echoed
    as ``scale``.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if r_grid is None:
        r_grid = default_r_grid(sample)
    r_grid = [float(r) for r in r_grid]
    if not r_grid:
        raise ValueError("radius grid must be non-empty")
    if any(r <= 0 for r in r_grid):
        raise ValueError("grid radii must be positive")

    diameter = sample.diameter()
    if sample.space.kind == "discrete":
        scale = 1.0  # the discrete metric has true diameter exactly 1
    else:
        scale = diameter * margin if diameter > 0 else 1.0
    normalized = sample.with_distances_scaled(1.0 / scale) if scale != 1.0 else sample

    delta_r = delta / len(r_grid)
    n = sample.n
    reports = []
    for r in sorted(r_grid):
        net = farthest_first_net(normalized, r / scale)
        m = len(net)
        if mu_spec is not None:
            est = conditional_missing_mass(mu_spec, sample, r, seed=seed)
            mhat = est.value
            mhat_hi = min(1.0, est.value + est.half_width)
            mhat_lo = max(0.0, est.value - est.half_width)
        else:
            mhat = martingale_upper_bound(sample, r, delta_r).value
            mhat_hi = mhat
            mhat_lo = mhat
        lower = w1_lower_bound(mhat_lo, r)
        upper_a = upper_b = None
        if m <= (n - 3) / 2:
            rep = w1_upper_bounds(normalized, r / scale, net, delta_r,
                                  mhat_upper=mhat_hi)
            upper_a = rep.upper_a * scale
            upper_b = rep.upper_b * scale
        reports.append(WassersteinReport(
            r=r, m=m, delta=delta_r, lower=lower, upper_a=upper_a,
            upper_b=upper_b, net_indices=tuple(int(i) for i in net),
            scale=scale, mhat=mhat))
    return reports
