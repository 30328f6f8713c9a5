import math

import numpy as np
import pytest

from metricmass.distributions import (
    DiscreteSpec,
    LowdimEmbeddingSpec,
    PointMassSpec,
    ScaledIndicatorSpec,
    SphereAtomSpec,
    UniformIntervalSpec,
    discrete_uniform,
    draw_sample,
)
from metricmass.oracles import (
    conditional_missing_mass,
    exact_wasserstein_1d,
    expected_missing_mass,
    smoothed_oracle_H,
)
from metricmass.samples import Sample

from helpers import brute_missing_mass_finite, transport_w1_atoms


def interval_sample(spec, *xs):
    return Sample(np.array(xs, dtype=float)[:, None], spec.space())


# -- conditional missing mass -------------------------------------------------

def test_uniform_interval_analytic():
    spec = UniformIntervalSpec(0.0, 1.0)
    s = interval_sample(spec, 0.5)
    est = conditional_missing_mass(spec, s, 0.25)
    assert est.method == "analytic"
    assert est.value == pytest.approx(0.5)


def test_discrete_unseen_atom():
    spec = DiscreteSpec(("a", "b", "c"), (0.5, 0.3, 0.2))
    s = draw_sample_from_symbols(spec, ["a", "b"])
    est = conditional_missing_mass(spec, s, 0.5)
    assert est.method == "analytic"
    assert est.value == pytest.approx(0.2)


def draw_sample_from_symbols(spec, symbols):
    return Sample(np.array(symbols), spec.space())


def test_radius_beyond_diameter_gives_zero():
    spec = DiscreteSpec(("a", "b"), (0.7, 0.3))
    s = draw_sample_from_symbols(spec, ["a"])
    assert conditional_missing_mass(spec, s, 1.0).value == 0.0

    uniform = UniformIntervalSpec(0.0, 1.0)
    su = interval_sample(uniform, 0.4)
    assert conditional_missing_mass(uniform, su, 1.5).value == 0.0


def test_finite_fast_path_matches_cross_distances():
    spec = SphereAtomSpec(dim=20, n_design=5)
    with_prov = draw_sample(spec, 5, seed=3)
    without = Sample(with_prov.points, with_prov.space)
    for r in (0.5, 1.2):
        a = conditional_missing_mass(spec, with_prov, r).value
        b = conditional_missing_mass(spec, without, r).value
        assert a == pytest.approx(b)
        brute = brute_missing_mass_finite(
            list(spec.atom_points()), spec.atom_weights(),
            list(without.points), spec.space(), r)
        assert a == pytest.approx(brute)


def test_interval_branch_matches_brute_force():
    spec = UniformIntervalSpec(0.0, 1.0)
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(1, 12))
        s = Sample(rng.uniform(0, 1, size=(n, 1)), spec.space())
        r = float(rng.uniform(0.01, 0.4))
        got = conditional_missing_mass(spec, s, r).value
        # Independent quadrature over a fine mesh.
        mesh = np.linspace(0, 1, 200_001)
        covered = (np.abs(mesh[:, None] - s.points.reshape(-1)[None, :]) <= r).any(axis=1)
        assert got == pytest.approx(1.0 - covered.mean(), abs=1e-4)


def test_monte_carlo_branch_agrees_with_analytic_shape():
    spec = LowdimEmbeddingSpec(1, 1, spread=0.0, component_std=1.0)  # plain gaussian
    s = Sample(np.array([[0.0]]), spec.space())
    est = conditional_missing_mass(spec, s, 1.0, n_test=40_000, alpha=0.01, seed=0)
    assert est.method == "monte_carlo"
    # Mass outside [-1, 1] under a standard normal.
    truth = 2 * (1 - 0.8413447460685429)
    assert abs(est.value - truth) <= est.half_width + 1e-3
    assert est.half_width == pytest.approx(math.sqrt(math.log(200) / 80_000))


def test_mc_determinism():
    spec = LowdimEmbeddingSpec(1, 1)
    s = Sample(np.array([[0.0]]), spec.space())
    a = conditional_missing_mass(spec, s, 0.5, n_test=5000, seed=7)
    b = conditional_missing_mass(spec, s, 0.5, n_test=5000, seed=7)
    assert a.value == b.value


def test_antitone_in_radius_and_extension():
    spec = UniformIntervalSpec(0.0, 1.0)
    rng = np.random.default_rng(4)
    xs = rng.uniform(0, 1, size=12)
    s_small = Sample(xs[:6, None], spec.space())
    s_full = Sample(xs[:, None], spec.space())
    v1 = conditional_missing_mass(spec, s_full, 0.05).value
    v2 = conditional_missing_mass(spec, s_full, 0.1).value
    assert v2 <= v1
    assert (conditional_missing_mass(spec, s_full, 0.05).value
            <= conditional_missing_mass(spec, s_small, 0.05).value)


# -- smoothed leave-one-out quantity -------------------------------------------

def test_H_single_point_is_one():
    spec = UniformIntervalSpec(0.0, 1.0)
    s = interval_sample(spec, 0.5)
    assert smoothed_oracle_H(spec, s, 0.25).value == pytest.approx(1.0)


def test_H_identical_atoms_zero():
    spec = DiscreteSpec(("a",), (1.0,))
    s = draw_sample_from_symbols(spec, ["a", "a"])
    assert smoothed_oracle_H(spec, s, 0.5).value == 0.0


def test_H_sandwich_everywhere():
    rng = np.random.default_rng(8)
    uniform = UniformIntervalSpec(0.0, 1.0)
    zipfish = discrete_uniform(6)
    for _ in range(25):
        n = int(rng.integers(1, 15))
        r = float(rng.uniform(0.02, 0.5))
        s = draw_sample(uniform, n, int(rng.integers(10_000)))
        mhat = conditional_missing_mass(uniform, s, r).value
        h_val = smoothed_oracle_H(uniform, s, r).value
        assert mhat - 1e-12 <= h_val <= mhat + 1.0 / n + 1e-12

        sd = draw_sample(zipfish, n, int(rng.integers(10_000)))
        mhat_d = conditional_missing_mass(zipfish, sd, 0.5).value
        h_d = smoothed_oracle_H(zipfish, sd, 0.5).value
        assert mhat_d - 1e-12 <= h_d <= mhat_d + 1.0 / n + 1e-12


def test_H_matches_leave_one_out_definition():
    spec = DiscreteSpec(("a", "b", "c", "d"), (0.4, 0.3, 0.2, 0.1))
    symbols = ["a", "b", "b", "c"]
    s = draw_sample_from_symbols(spec, symbols)
    n = len(symbols)
    total = 0.0
    for k in range(n):
        rest = symbols[:k] + symbols[k + 1:]
        total += brute_missing_mass_finite(
            list(spec.atom_points()), spec.atom_weights(), rest, spec.space(), 0.5)
    assert smoothed_oracle_H(spec, s, 0.5).value == pytest.approx(total / n)


def test_H_monte_carlo_close_to_analytic():
    spec = UniformIntervalSpec(0.0, 1.0)
    s = draw_sample(spec, 8, seed=5)
    exact = smoothed_oracle_H(spec, s, 0.1).value

    class Opaque:
        def space(self):
            return spec.space()

        def sample(self, count, rng):
            return spec.sample(count, rng)

    est = smoothed_oracle_H(Opaque(), s, 0.1, n_test=60_000, alpha=0.01, seed=1)
    assert est.method == "monte_carlo"
    assert abs(est.value - exact) <= est.half_width


# -- expected missing mass ------------------------------------------------------

def test_expected_mass_two_symbols():
    spec = DiscreteSpec(("a", "b"), (0.5, 0.5))
    est = expected_missing_mass(spec, 1, 0.5)
    assert est.method == "analytic"
    assert est.value == pytest.approx(0.5)


def test_expected_mass_single_atom_zero():
    spec = DiscreteSpec(("a",), (1.0,))
    assert expected_missing_mass(spec, 1, 0.5).value == 0.0


def test_expected_mass_closed_form_uniform_symbols():
    k, n = 10, 20
    spec = discrete_uniform(k)
    est = expected_missing_mass(spec, n, 0.5)
    assert est.value == pytest.approx(k * (1 / k) * (1 - 1 / k) ** n)


def test_expected_mass_beyond_diameter():
    spec = discrete_uniform(3)
    assert expected_missing_mass(spec, 4, 1.0).value == 0.0


def test_expected_mass_monte_carlo_uniform():
    spec = UniformIntervalSpec(0.0, 1.0)
    est = expected_missing_mass(spec, 10, 0.1, replicates=400, seed=0)
    assert est.method == "monte_carlo"
    # Envelope of 10 balls of radius 0.1; from an independent 4000-rep run
    # the expectation is near 0.128, well inside the reported width.
    rng = np.random.default_rng(99)
    vals = []
    for _ in range(4000):
        xs = rng.uniform(0, 1, 10)
        mesh = np.linspace(0, 1, 2001)
        covered = (np.abs(mesh[:, None] - xs[None, :]) <= 0.1).any(axis=1)
        vals.append(1 - covered.mean())
    assert abs(est.value - np.mean(vals)) <= est.half_width + 0.01


# -- exact one-dimensional Wasserstein -----------------------------------------

def test_w1_point_mass_identical():
    spec = PointMassSpec(((2.0,),), (1.0,))
    s = Sample(np.array([[2.0]]), spec.space())
    assert exact_wasserstein_1d(spec, s) == 0.0


def test_w1_two_atoms():
    spec = PointMassSpec(((0.0,), (1.0,)), (0.5, 0.5))
    s = Sample(np.array([[0.0], [0.0]]), spec.space())
    assert exact_wasserstein_1d(spec, s) == pytest.approx(0.5)
    lp = transport_w1_atoms(np.array([0.0, 1.0]), np.array([0.5, 0.5]),
                            np.array([0.0]), np.array([1.0]))
    assert exact_wasserstein_1d(spec, s) == pytest.approx(lp)


def test_w1_uniform_single_point():
    spec = UniformIntervalSpec(0.0, 1.0)
    s = Sample(np.array([[0.5]]), spec.space())
    assert exact_wasserstein_1d(spec, s) == pytest.approx(0.25)


def test_w1_uniform_against_quadrature():
    spec = UniformIntervalSpec(0.0, 1.0)
    rng = np.random.default_rng(12)
    for _ in range(10):
        n = int(rng.integers(1, 30))
        xs = np.sort(rng.uniform(0, 1, n))
        s = Sample(xs[:, None], spec.space())
        got = exact_wasserstein_1d(spec, s)
        mesh = np.linspace(-0.1, 1.1, 400_001)
        f_mu = np.clip(mesh, 0, 1)
        f_hat = np.searchsorted(xs, mesh, side="right") / n
        quad = np.trapezoid(np.abs(f_mu - f_hat), mesh)
        assert got == pytest.approx(quad, abs=5e-5)


def test_w1_dominates_scaled_missing_mass():
    spec = UniformIntervalSpec(0.0, 1.0)
    rng = np.random.default_rng(14)
    for _ in range(15):
        s = draw_sample(spec, int(rng.integers(2, 50)), int(rng.integers(1000)))
        w1 = exact_wasserstein_1d(spec, s)
        for r in (0.01, 0.05, 0.2):
            mhat = conditional_missing_mass(spec, s, r).value
            assert w1 >= r * mhat - 1e-12


def test_w1_unsupported_space():
    spec = ScaledIndicatorSpec(p=2.0)
    s = draw_sample(spec, 5, seed=0)
    with pytest.raises(ValueError):
        exact_wasserstein_1d(spec, s)
