import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigtest.degree import (
    DegreeCdfPair,
    dd_distance,
    degree_cdf_pair,
    empirical_degree_cdf,
    theoretical_cdf_grid,
    theoretical_degree_cdf,
)
from rigtest.errors import DomainError, ShapeError
from rigtest.graph import IntervalGraph, degrees_from_endpoints, interval_endpoints


def limiting_cdf_by_simulation(x, draws=1_000_000, seed=5):
    # a vertex [a, b] with uniform endpoints meets another interval w.p. 1 - a^2 - (1-b)^2;
    # degree / n converges to that probability
    u = np.sort(np.random.default_rng(seed).random((2, draws)), axis=0)
    p = 1.0 - u[0] ** 2 - (1.0 - u[1]) ** 2
    return np.array([(p <= xi).mean() for xi in np.atleast_1d(x)])


class TestTheoreticalCdf:
    def test_endpoints_exact(self):
        assert theoretical_degree_cdf(0.0) == 0.0
        assert theoretical_degree_cdf(1.0) == 1.0

    def test_half(self):
        assert theoretical_degree_cdf(0.5) == pytest.approx(1 - math.pi / 4, abs=1e-12)

    def test_three_quarters(self):
        assert theoretical_degree_cdf(0.75) == pytest.approx(1 - 0.25 * math.pi / 2, abs=1e-12)

    def test_branches_agree_at_half(self):
        below = theoretical_degree_cdf(np.nextafter(0.5, 0.0))
        above = theoretical_degree_cdf(0.5)
        # sqrt(1 - 2x) term: one ulp below 1/2 moves F by about sqrt(2 * 2**-53)
        assert abs(below - above) < 3 * np.sqrt(2 * np.finfo(float).eps)

    def test_lower_branch_formula_at_half(self):
        # both closed forms evaluated directly at x = 1/2
        x = 0.5
        lower = 1 - (1 - x) * (math.pi / 2 - 2 * math.acos(1 / math.sqrt(2 - 2 * x))) - math.sqrt(1 - 2 * x)
        upper = 1 - (1 - x) * math.pi / 2
        assert lower == pytest.approx(upper, abs=1e-12)

    def test_monotone_and_bounded(self):
        x = np.linspace(0, 1, 20001)
        f = theoretical_degree_cdf(x)
        assert np.all(np.diff(f) >= -1e-15)
        assert f.min() >= 0 and f.max() <= 1

    @pytest.mark.parametrize("bad", [-0.01, 1.01, np.nan])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            theoretical_degree_cdf(bad)

    def test_matches_simulation(self):
        x = np.array([0.05, 0.2, 0.35, 0.49, 0.5, 0.6, 0.8, 0.95])
        assert np.allclose(theoretical_degree_cdf(x), limiting_cdf_by_simulation(x), atol=2.5e-3)

    def test_grid_cached_readonly(self):
        g = theoretical_cdf_grid(7)
        assert g is theoretical_cdf_grid(7)
        assert not g.flags.writeable
        assert np.allclose(g, theoretical_degree_cdf(np.arange(1, 8) / 7))


class TestEmpiricalCdf:
    @pytest.mark.parametrize("degrees, expected", [
        ([0, 0, 0], [1, 1, 1]),
        ([2, 2, 2], [0, 1, 1]),
        ([1, 2, 1], [2 / 3, 1, 1]),
    ])
    def test_examples(self, degrees, expected):
        g = IntervalGraph(len(degrees), degrees)
        assert np.allclose(empirical_degree_cdf(g), expected)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=60).filter(lambda v: len(v) % 2 == 0))
    def test_properties(self, values):
        lo, hi = interval_endpoints(values)
        emp = empirical_degree_cdf(degrees_from_endpoints(lo, hi))
        assert np.all(np.diff(emp) >= 0)
        assert emp[-1] == 1.0
        assert emp.min() >= 0


class TestDistance:
    def test_identity(self):
        t = theoretical_cdf_grid(9)
        assert dd_distance(DegreeCdfPair(9, t, t.copy())) == 0.0

    def test_single_vertex(self):
        assert dd_distance((theoretical_cdf_grid(1), np.array([1.0]))) == 0.0

    def test_two_vertices(self):
        t1, t2 = theoretical_degree_cdf(0.5), theoretical_degree_cdf(1.0)
        expected = ((0 - math.sqrt(t1)) ** 2 + (1 - math.sqrt(t2)) ** 2) / math.sqrt(2)
        assert dd_distance((np.array([t1, t2]), np.array([0.0, 1.0]))) == pytest.approx(expected, rel=1e-14)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            dd_distance((np.ones(3), np.ones(4)))

    def test_invariant_under_monotone_transform(self, rng):
        y = rng.random(600)
        pairs = []
        for values in (y, np.log(y), 10 * y**5 + 3):
            lo, hi = interval_endpoints(values)
            g = IntervalGraph(lo.size, degrees_from_endpoints(lo, hi))
            pairs.append(dd_distance(degree_cdf_pair(g)))
        assert pairs[0] == pairs[1] == pairs[2]

    def test_nonnegative(self, rng):
        for _ in range(20):
            emp = np.sort(rng.random(10))
            assert dd_distance((theoretical_cdf_grid(10), emp)) >= 0


def test_empirical_converges_to_limit():
    gaps = []
    grid = theoretical_cdf_grid(500)
    for seed in range(200):
        lo, hi = interval_endpoints(np.random.default_rng(seed).random(1000))
        gaps.append(np.max(np.abs(empirical_degree_cdf(degrees_from_endpoints(lo, hi)) - grid)))
    assert np.median(gaps) < 0.05
