import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigtest.errors import DomainError, InputError, LengthError
from rigtest.graph import (
    Interval,
    build_intervals,
    conditional_edge_probability,
    degree_sequence,
    degrees_from_endpoints,
    interval_endpoints,
    intervals_intersect,
    random_disjoint_pairing,
)


def brute_degrees(intervals):
    n = len(intervals)
    return [sum(1 for i in range(n) if i != j and intervals_intersect(intervals[i], intervals[j]))
            for j in range(n)]


series_strategy = st.lists(
    st.integers(-50, 50).map(float), min_size=2, max_size=40
).filter(lambda v: len(v) % 2 == 0)


class TestBuildIntervals:
    def test_sorted_pairs(self):
        assert [tuple(iv) for iv in build_intervals([1, 3, 5, 2])] == [(1, 3), (2, 5)]

    def test_example_prefix(self):
        assert [tuple(iv) for iv in build_intervals([13, 73, 89, 78])] == [(13, 73), (78, 89)]

    def test_zero_width(self):
        (iv,) = build_intervals([2, 2])
        assert iv.lo == iv.hi == 2

    def test_odd_length(self):
        with pytest.raises(LengthError):
            build_intervals([1, 2, 3])

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_non_finite(self, bad):
        with pytest.raises(InputError):
            build_intervals([1.0, bad])

    def test_interval_sorts_endpoints(self):
        assert Interval(5, 1) == Interval(1, 5)


class TestIntersect:
    @pytest.mark.parametrize("a, b, expected", [
        ((13, 73), (1, 11), False),
        ((21, 51), (39, 43), True),
        ((0, 1), (1, 2), True),
        ((0, 1), (1.5, 2), False),
        ((2, 2), (2, 2), True),
    ])
    def test_cases(self, a, b, expected):
        assert intervals_intersect(Interval(*a), Interval(*b)) is expected
        assert intervals_intersect(Interval(*b), Interval(*a)) is expected


class TestDegreeSequence:
    @pytest.mark.parametrize("ivs, expected", [
        ([(0, 10), (1, 9), (2, 8)], [2, 2, 2]),
        ([(0, 1), (2, 3), (4, 5)], [0, 0, 0]),
        ([(0, 2), (1, 3), (2.5, 4)], [1, 2, 1]),
    ])
    @pytest.mark.parametrize("method", ["pairwise", "sweep"])
    def test_small_graphs(self, ivs, expected, method):
        g = degree_sequence([Interval(*iv) for iv in ivs], method=method)
        assert g.degrees.tolist() == expected

    def test_adjacency_kept(self):
        g = degree_sequence([Interval(0, 2), Interval(1, 3), Interval(2.5, 4)], adjacency=True)
        assert g.adjacency.tolist() == [[False, True, False], [True, False, True], [False, True, False]]

    @settings(max_examples=200, deadline=None)
    @given(series_strategy)
    def test_sweep_matches_brute_force(self, values):
        ivs = build_intervals(values)
        expected = brute_degrees(ivs)
        assert degree_sequence(ivs, method="pairwise").degrees.tolist() == expected
        assert degree_sequence(ivs, method="sweep").degrees.tolist() == expected

    @settings(max_examples=100, deadline=None)
    @given(series_strategy)
    def test_invariants(self, values):
        g = degree_sequence(build_intervals(values))
        assert np.all((g.degrees >= 0) & (g.degrees <= g.n - 1))
        assert g.degrees.sum() % 2 == 0

    @settings(max_examples=100, deadline=None)
    @given(series_strategy, st.randoms())
    def test_permutation_covariant(self, values, random):
        ivs = build_intervals(values)
        perm = list(range(len(ivs)))
        random.shuffle(perm)
        base = degree_sequence(ivs).degrees
        permuted = degree_sequence([ivs[p] for p in perm]).degrees
        assert permuted.tolist() == base[perm].tolist()

    @pytest.mark.parametrize("transform", [np.exp, lambda v: v**3, lambda v: 2.5 * v - 7, np.arctan])
    def test_monotone_invariance(self, rng, transform):
        y = rng.standard_normal(400)
        lo, hi = interval_endpoints(y)
        lo2, hi2 = interval_endpoints(transform(y))
        assert np.array_equal(degrees_from_endpoints(lo, hi), degrees_from_endpoints(lo2, hi2))

    def test_empty(self):
        with pytest.raises(LengthError):
            degree_sequence([])


class TestPairing:
    def test_two_vertices(self):
        for seed in range(5):
            assert random_disjoint_pairing(2, seed).pairs in (((0, 1),), ((1, 0),))

    def test_deterministic(self):
        assert random_disjoint_pairing(10, 42).pairs == random_disjoint_pairing(10, 42).pairs

    def test_perfect_matching(self):
        p = random_disjoint_pairing(50, 3)
        assert sorted(itertools.chain.from_iterable(p.pairs)) == list(range(50))
        assert p.seed == 3

    @pytest.mark.parametrize("count", [0, 1, 7])
    def test_odd_or_small(self, count):
        with pytest.raises(LengthError):
            random_disjoint_pairing(count, 0)

    def test_pair_frequencies_uniform(self):
        # each of the 45 unordered pairs appears with probability 1/9 in a uniform matching
        trials = 10_000
        counts = np.zeros((10, 10))
        for seed in range(trials):
            for a, b in random_disjoint_pairing(10, seed).pairs:
                counts[min(a, b), max(a, b)] += 1
        freq = counts[np.triu_indices(10, 1)] / trials
        se = np.sqrt((1 / 9) * (8 / 9) / trials)
        assert np.all(np.abs(freq - 1 / 9) < 3.5 * se)


class TestConditionalEdgeProbability:
    @pytest.mark.parametrize("iv, expected", [((0, 1), 1.0), ((0.5, 0.5), 0.5), ((0, 0), 0.0), ((1, 1), 0.0)])
    def test_values(self, iv, expected):
        assert conditional_edge_probability(Interval(*iv)) == pytest.approx(expected, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            conditional_edge_probability(Interval(-0.1, 0.5))

    @pytest.mark.parametrize("iv", [(0.2, 0.3), (0.1, 0.9), (0.6, 0.65)])
    def test_matches_simulation(self, rng, iv):
        fixed = Interval(*iv)
        draws = np.sort(rng.random((2, 100_000)), axis=0)
        hits = np.maximum(draws[0], fixed.lo) <= np.minimum(draws[1], fixed.hi)
        p = conditional_edge_probability(fixed)
        se = np.sqrt(p * (1 - p) / hits.size)
        assert abs(hits.mean() - p) < 3 * se

    def test_edge_probability_two_thirds(self, rng):
        ends = rng.random((20_000, 4))
        hits = [intervals_intersect(Interval(a, b), Interval(c, d)) for a, b, c, d in ends]
        assert abs(np.mean(hits) - 2 / 3) < 0.015
