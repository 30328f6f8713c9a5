"""The local-separation statistic h and its concentration consequences.

h(X, r) is the largest cardinality of a sub-sample whose points are pairwise
separated by more than r yet all contained in one closed r-ball.  It acts as
an empirical local packing number: the variance and tail bounds in
:mod:`metricmass.bounds` degrade linearly in E[h], so small observed h
certifies concentration of the estimators regardless of the ambient
dimension.

Computing h exactly is a bounded search.  The property is hereditary (every
subsequence of a locally separated sequence is locally separated), so a
depth-first search that only ever extends feasible subsets enumerates all of
them.  Candidate pairs are pre-filtered by the necessary condition
r < d(x_i, x_j) <= 2r; the 2r half relies on the triangle inequality and is
sound for every built-in space kind (precomputed matrices are assumed to be
metrics for this purpose).

Locality of a candidate subset is decided per space kind:

* euclidean: minimum enclosing ball radius <= r, an exact test, so the
  search result is exact when it terminates below the cap;
* discrete: h = 1 identically (no two distinct symbols fit in a ball of
  radius below 1, and no pair is separated at radius 1 or above);
* everything else: candidate centers are restricted to sample points, which
  certifies a lower bound only, since the true center may lie off-sample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .meb import meb_radius, three_point_radius
from .samples import Sample
from .spaces import DISCRETE, EUCLIDEAN, LP, MetricSpace

EXACT = "exact"
UPPER_BOUND = "upper_bound"
LOWER_BOUND = "lower_bound"

BRUTE_FORCE = "brute_force"
CLIQUE_RELAXATION = "clique_relaxation"
PACKING_CAP = "packing_cap"

DEFAULT_CAP = 8
MEB_FEASIBILITY_RTOL = 1e-9


@dataclass(frozen=True)
class SeparationReport:
    value: int
    certified: str
    method: str
    witness: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "certified": self.certified,
            "method": self.method,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def h_exact(sample: Sample, r: float, cap: int = DEFAULT_CAP) -> SeparationReport:
    """Largest locally separated sub-sample, searched up to size ``cap``.

    Returns an exact value with witness when the space admits an exact
    locality test and the search terminates below the cap; otherwise the
    value is a certified lower bound (the witness is still genuine).
    """
    if sample.n < 1:
        raise ValueError("sample must be non-empty")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if r < 0:
        raise ValueError("radius must be non-negative")
    kind = sample.space.kind
    if kind == DISCRETE:
        return SeparationReport(1, EXACT, BRUTE_FORCE, witness=(0,))

    n = sample.n
    d = sample.distance_matrix()
    adj = (d > r) & (d <= 2.0 * r * (1.0 + MEB_FEASIBILITY_RTOL))
    np.fill_diagonal(adj, False)

    exact_locality = kind == EUCLIDEAN
    r_feas = r * (1.0 + MEB_FEASIBILITY_RTOL)

    if exact_locality:
        pts = sample.points

        def feasible(subset: list[int]) -> bool:
            k = len(subset)
            if k <= 2:
                # The pairwise window d <= 2r already certifies a midpoint.
                return True
            if k == 3:
                i, j, l = subset
                return three_point_radius(d[i, j], d[i, l], d[j, l]) <= r_feas
            return meb_radius(pts[subset]) <= r_feas
    else:
        def feasible(subset: list[int]) -> bool:
            return bool((d[:, subset].max(axis=1) <= r_feas).any())

    best: list[int] = [0]
    capped = False

    def extend(subset: list[int], candidates: np.ndarray) -> None:
        nonlocal best, capped
        if len(subset) > len(best):
            best = list(subset)
        if len(subset) >= cap:
            capped = True
            return
        for pos, v in enumerate(candidates):
            if len(subset) + (len(candidates) - pos) <= len(best):
                return
            trial = subset + [int(v)]
            if not feasible(trial):
                continue
            rest = candidates[pos + 1:]
            extend(trial, rest[adj[v, rest]])
            if capped and len(best) >= cap:
                return

    order = np.arange(n)
    for v in order:
        if capped and len(best) >= cap:
            break
        nbrs = order[order > v]
        extend([int(v)], nbrs[adj[v, nbrs]])

    value = len(best)
    if capped and value >= cap:
        return SeparationReport(cap, LOWER_BOUND, BRUTE_FORCE, witness=tuple(best[:cap]))
    certified = EXACT if exact_locality else LOWER_BOUND
    return SeparationReport(value, certified, BRUTE_FORCE, witness=tuple(best))


def h_clique_relaxed(sample: Sample, r: float) -> SeparationReport:
    """Maximum clique of the graph with edges where r < d(x_i, x_j) <= 2r.

    Dropping the shared-center requirement in favor of its pairwise
    consequence makes this an upper bound for h; the converse can fail, so
    the certificate is one-sided.
    """
    if sample.n < 1:
        raise ValueError("sample must be non-empty")
    if r < 0:
        raise ValueError("radius must be non-negative")
    d = sample.distance_matrix()
    adj = (d > r) & (d <= 2.0 * r)
    np.fill_diagonal(adj, False)
    clique = _max_clique(adj)
    return SeparationReport(len(clique), UPPER_BOUND, CLIQUE_RELAXATION,
                            witness=tuple(sorted(clique)))


def _max_clique(adj: np.ndarray) -> list[int]:
    """Exact maximum clique by branch and bound with greedy coloring."""
    n = adj.shape[0]
    if n == 0:
        return []
    best: list[int] = [int(np.argmax(adj.sum(axis=1)))] if n else []
    if not adj.any():
        return [0]

    def color_bound(cands: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # Greedy coloring; returns candidates reordered by color with the
        # color number as an upper bound on the clique size within them.
        order: list[int] = []
        col_of: list[int] = []
        color = 0
        remaining = list(range(len(cands)))
        while remaining:
            color += 1
            nxt = []
            picked: list[int] = []
            for i in remaining:
                if all(not adj[cands[i], cands[j]] for j in picked):
                    picked.append(i)
                else:
                    nxt.append(i)
            for i in picked:
                order.append(i)
                col_of.append(color)
            remaining = nxt
        return cands[np.array(order)], np.array(col_of)

    def expand(clique: list[int], cands: np.ndarray) -> None:
        nonlocal best
        if len(cands) == 0:
            if len(clique) > len(best):
                best = list(clique)
            return
        ordered, colors = color_bound(cands)
        for i in range(len(ordered) - 1, -1, -1):
            if len(clique) + colors[i] <= len(best):
                return
            v = int(ordered[i])
            nxt = ordered[:i][adj[v, ordered[:i]]]
            expand(clique + [v], nxt)

    expand([], np.arange(n))
    return best


def packing_cap(space: MetricSpace) -> int | None:
    """Dimension-based ceiling on h: 3^D for the 2-norm, 8^D for general
    p-norms, 1 for the discrete metric, and none where no cap is known."""
    if space.kind == DISCRETE:
        return 1
    if space.kind == EUCLIDEAN:
        return 3 ** space.dim
    if space.kind == LP:
        return 8 ** space.dim
    return None


def eh_upper_from_sample(h_observed: int, delta: float) -> float:
    """Upper estimate of E[h] from one observation, valid with probability
    at least 1 - delta: (sqrt(h) + sqrt(2 ln(1/delta)))^2."""
    if h_observed < 1:
        raise ValueError("h is at least 1 on non-empty samples")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    t = math.log(1.0 / delta)
    return (math.sqrt(h_observed) + math.sqrt(2.0 * t)) ** 2
