import math

import numpy as np
import pytest

from metricmass.distributions import ScaledIndicatorSpec, draw_sample
from metricmass.meb import meb_radius
from metricmass.samples import make_sample
from metricmass.separation import (
    eh_upper_from_sample,
    h_clique_relaxed,
    h_exact,
    packing_cap,
)
from metricmass.spaces import discrete, euclidean, lp, precomputed, scaled_indicator

from helpers import h_grid_oracle


def line_sample(*xs):
    return make_sample(np.array(xs, dtype=float)[:, None])


def test_discrete_always_one():
    s = make_sample(np.array(["a", "b", "c", "a"]), discrete())
    for r in (0.2, 0.5, 1.0, 3.0):
        rep = h_exact(s, r)
        assert rep.value == 1 and rep.certified == "exact"


def test_single_point():
    rep = h_exact(line_sample(4.0), 2.0)
    assert rep.value == 1 and rep.certified == "exact"


def test_pair_in_one_ball():
    rep = h_exact(line_sample(0.0, 1.9), 1.5)
    assert rep.value == 2
    assert rep.certified == "exact"
    assert sorted(rep.witness) == [0, 1]


def test_one_dimension_at_most_two():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 30))
        s = make_sample(rng.uniform(0, 1, size=(n, 1)))
        r = float(rng.uniform(0.01, 0.5))
        assert h_exact(s, r).value <= 2


def test_witness_is_genuine():
    rng = np.random.default_rng(1)
    for _ in range(40):
        n = int(rng.integers(3, 15))
        pts = rng.normal(size=(n, 2))
        s = make_sample(pts)
        r = float(rng.uniform(0.3, 1.5))
        rep = h_exact(s, r)
        w = list(rep.witness)
        d = s.distance_matrix()[np.ix_(w, w)]
        iu = np.triu_indices(len(w), k=1)
        assert (d[iu] > r).all()
        assert meb_radius(pts[w]) <= r * (1 + 1e-8)


def test_matches_grid_oracle_euclidean():
    rng = np.random.default_rng(42)
    for _ in range(30):
        dim = int(rng.integers(1, 3))
        n = int(rng.integers(3, 11))
        pts = rng.uniform(size=(n, dim))
        s = make_sample(pts)
        d = s.distance_matrix()
        r = float(np.quantile(d[np.triu_indices(n, 1)], 0.4))
        if r <= 0:
            continue
        assert h_exact(s, r).value == h_grid_oracle(pts, r)


def test_cap_reports_lower_bound():
    # Regular simplex scaled into the window (r, 2r]: all 4 points pairwise
    # sqrt(2) apart and within one ball of radius 1.
    pts = np.eye(4)
    s = make_sample(pts)
    rep = h_exact(s, 1.0, cap=3)
    assert rep.value == 3
    assert rep.certified == "lower_bound"
    full = h_exact(s, 1.0, cap=8)
    assert full.value == 4 and full.certified == "exact"


def test_non_euclidean_sample_scan_is_lower_bound():
    m = np.array([
        [0.0, 1.2, 1.2],
        [1.2, 0.0, 1.2],
        [1.2, 1.2, 0.0],
    ])
    s = make_sample([0, 1, 2], precomputed(m))
    rep = h_exact(s, 1.0)
    assert rep.certified == "lower_bound"
    assert rep.value == 1  # no sample point covers a separated pair


def test_hereditary_monotone_under_extension():
    rng = np.random.default_rng(9)
    pts = rng.normal(size=(20, 2))
    r = 0.8
    prev = 0
    for n in range(1, 21):
        val = h_exact(make_sample(pts[:n]), r).value
        assert val >= prev
        prev = val


def test_clique_relaxed_discrete_counts_symbols():
    s = make_sample(np.array(["a", "a", "b", "c"]), discrete())
    rep = h_clique_relaxed(s, 0.5)
    assert rep.value == 3
    assert rep.certified == "upper_bound"


def test_clique_relaxed_pair():
    rep = h_clique_relaxed(line_sample(0.0, 1.9), 1.5)
    assert rep.value == 2


def test_clique_relaxed_identical_points():
    rep = h_clique_relaxed(line_sample(5.0, 5.0, 5.0), 1.0)
    assert rep.value == 1


def test_clique_dominates_exact():
    rng = np.random.default_rng(17)
    for _ in range(40):
        n = int(rng.integers(2, 18))
        pts = rng.normal(size=(n, 2)) * 0.7
        s = make_sample(pts)
        r = float(rng.uniform(0.2, 1.2))
        exact = h_exact(s, r)
        relaxed = h_clique_relaxed(s, r)
        if exact.certified == "exact":
            assert exact.value <= relaxed.value


def test_packing_caps():
    assert packing_cap(euclidean(2)) == 9
    assert packing_cap(euclidean(3)) == 27
    assert packing_cap(lp(3, 1.5)) == 512
    assert packing_cap(discrete()) == 1
    assert packing_cap(scaled_indicator(2.0)) is None
    assert packing_cap(precomputed([[0.0]])) is None


def test_h_within_packing_cap():
    rng = np.random.default_rng(23)
    for _ in range(20):
        n = int(rng.integers(2, 14))
        pts = rng.normal(size=(n, 2)) * 0.4
        s = make_sample(pts)
        rep = h_exact(s, float(rng.uniform(0.2, 1.0)))
        assert rep.value <= packing_cap(s.space)


def test_indicator_embedding_h_at_most_five():
    spec = ScaledIndicatorSpec(p=2.0)
    for seed in range(15):
        s = draw_sample(spec, 25, seed)
        for r in (0.2, 0.5, 1.0):
            assert h_exact(s, r).value <= 5


def test_h_upper_tail_against_twice_mean():
    # Frequency of h exceeding twice its mean by t stays under exp(-6t/7),
    # with the mean taken from an independent larger run.
    from metricmass.distributions import LowdimEmbeddingSpec
    from metricmass.samples import Sample

    spec = LowdimEmbeddingSpec(2, 2)
    n, r = 25, 0.15

    def run(rng, reps):
        return np.array([h_exact(Sample(spec.sample(n, rng), spec.space()), r).value
                         for _ in range(reps)])

    e_h = run(np.random.default_rng(31), 8000).mean()
    h_vals = run(np.random.default_rng(32), 2000)
    for t in (1.0, 2.0):
        freq = (h_vals - 2 * e_h > t).mean()
        bound = math.exp(-6.0 * t / 7.0)
        assert freq <= bound + 3 * math.sqrt(bound * (1 - bound) / len(h_vals)) + 1e-3


def test_eh_upper_examples():
    assert eh_upper_from_sample(1, math.exp(-1)) == pytest.approx((1 + math.sqrt(2)) ** 2)
    assert eh_upper_from_sample(4, math.exp(-2)) == pytest.approx(16.0)
    assert eh_upper_from_sample(1, 1 - 1e-12) == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(ValueError):
        eh_upper_from_sample(0, 0.5)
    with pytest.raises(ValueError):
        eh_upper_from_sample(2, 1.5)
