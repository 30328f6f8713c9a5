"""Independent brute-force oracles used to validate the library paths.

Everything here is deliberately written the slow, obvious way (explicit
loops, pairwise distance calls, grid searches) so that agreement with the
vectorized implementations is meaningful.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np


def brute_good_turing(points, space, r):
    """Fraction of points farther than r from every other point, by loops."""
    n = len(points)
    isolated = 0
    for k in range(n):
        if all(space.distance(points[k], points[i]) > r
               for i in range(n) if i != k):
            isolated += 1
    return isolated / n


def brute_martingale(points, space, r, m):
    """Average escape indicator over the last m points, by loops."""
    n = len(points)
    total = 0
    for k in range(n - m, n):
        if all(space.distance(points[k], points[i]) > r for i in range(k)):
            total += 1
    return total / m


def brute_missing_mass_finite(atom_points, weights, sample_points, space, r):
    """Sum of atom weights farther than r from every sample point."""
    mass = 0.0
    for a, w in zip(atom_points, weights):
        if all(space.distance(a, x) > r for x in sample_points):
            mass += w
    return mass


def h_grid_oracle(points, r, cap=8, pitch_rel=0.01, accept_tol=None):
    """Exhaustive local-separation search with a fine-grid center scan.

    Enumerates every subset up to ``cap``, requires strict pairwise
    separation, and certifies locality by finding a grid center with pitch
    pitch_rel * r whose farthest subset point is within r * (1 + accept_tol)
    (accept_tol defaults to the pitch).  With accept_tol=0 the oracle only
    counts sets with a genuine radius-r witness, so it never overcounts;
    with the default it never undercounts.  Size-two subsets are accepted
    directly via their midpoint.
    """
    pts = np.asarray(points, dtype=float)
    n, dim = pts.shape
    if accept_tol is None:
        accept_tol = pitch_rel
    r_tol = r * (1.0 + accept_tol)
    pitch = r * pitch_rel
    coarse = r * 0.1
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    best = 1
    for size in range(2, min(cap, n) + 1):
        found = False
        for subset in combinations(range(n), size):
            idx = list(subset)
            sub_d = d[np.ix_(idx, idx)]
            iu = np.triu_indices(size, k=1)
            if not (sub_d[iu] > r).all():
                continue
            if not (sub_d[iu] <= 2.0 * r_tol).all():
                continue
            sub = pts[idx]
            if size == 2:
                if sub_d[0, 1] <= 2.0 * r_tol:
                    found = True
                    break
                continue
            lo = sub.max(axis=0) - r_tol
            hi = sub.min(axis=0) + r_tol
            if (lo > hi).any():
                continue
            # Cheap lower bound: even the box point closest to the worst
            # subset point may already be too far.
            nearest = np.clip(sub, lo, hi)
            if np.linalg.norm(sub - nearest, axis=1).max() > r_tol:
                continue
            if _grid_hit(sub, lo, hi, coarse, r_tol):
                found = True
                break
            if _grid_hit(sub, lo, hi, pitch, r_tol):
                found = True
                break
        if found:
            best = size
        else:
            break
    return best


def _grid_hit(sub, lo, hi, pitch, r_tol, chunk=200_000):
    axes = [np.arange(l, h + pitch / 2.0, pitch) for l, h in zip(lo, hi)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, sub.shape[1])
    for start in range(0, len(mesh), chunk):
        block = mesh[start:start + chunk]
        dist = np.linalg.norm(block[:, None, :] - sub[None, :, :], axis=2).max(axis=1)
        if (dist <= r_tol).any():
            return True
    return False


def transport_w1_atoms(mu_positions, mu_weights, nu_positions, nu_weights):
    """W1 between two atomic measures on the line, by CDF area over a mesh."""
    xs = np.unique(np.concatenate([mu_positions, nu_positions]))
    total = 0.0
    for left, right in zip(xs[:-1], xs[1:]):
        f_mu = mu_weights[np.asarray(mu_positions) <= left].sum()
        f_nu = nu_weights[np.asarray(nu_positions) <= left].sum()
        total += abs(f_mu - f_nu) * (right - left)
    return total
