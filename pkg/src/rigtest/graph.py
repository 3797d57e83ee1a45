"""Random interval graphs built from a univariate series.

Consecutive observations ``(y[2j], y[2j+1])`` form closed intervals; two
vertices are adjacent when their intervals intersect.  Only the ordering of
the observations matters, so everything here is invariant under strictly
increasing transforms of the data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from rigtest.errors import DomainError, InputError, LengthError
from rigtest.seeding import SeedLike, as_generator

__all__ = [
    "Interval",
    "IntervalGraph",
    "Pairing",
    "as_series",
    "interval_endpoints",
    "build_intervals",
    "intervals_intersect",
    "degree_sequence",
    "degrees_from_endpoints",
    "random_disjoint_pairing",
    "conditional_edge_probability",
]


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``; endpoints given in either order."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if lo > hi:
            lo, hi = hi, lo
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __iter__(self):
        yield self.lo
        yield self.hi


@dataclass(frozen=True)
class IntervalGraph:
    n: int
    degrees: np.ndarray
    adjacency: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        degrees = np.asarray(self.degrees, dtype=np.int64)
        degrees.setflags(write=False)
        object.__setattr__(self, "degrees", degrees)


@dataclass(frozen=True)
class Pairing:
    pairs: tuple[tuple[int, int], ...]
    seed: object = None

    def as_array(self) -> np.ndarray:
        return np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)


def as_series(series, min_length: int = 1) -> np.ndarray:
    """Validate a series as a finite 1-d float array."""
    arr = np.asarray(series, dtype=float)
    if arr.ndim != 1:
        raise InputError(f"series must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise LengthError(f"series needs at least {min_length} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise InputError("series contains non-finite values")
    return arr


def interval_endpoints(series) -> tuple[np.ndarray, np.ndarray]:
    """Sorted endpoints ``(lo, hi)`` of the intervals formed by consecutive pairs."""
    arr = as_series(series, min_length=2)
    if arr.size % 2:
        raise LengthError(f"series length must be even, got {arr.size}")
    a, b = arr[0::2], arr[1::2]
    return np.minimum(a, b), np.maximum(a, b)


def build_intervals(series) -> list[Interval]:
    lo, hi = interval_endpoints(series)
    return [Interval(float(a), float(b)) for a, b in zip(lo, hi)]


def intervals_intersect(a: Interval, b: Interval) -> bool:
    # closed intervals: touching endpoints count as intersecting
    return max(a.lo, b.lo) <= min(a.hi, b.hi)


def degrees_from_endpoints(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Degree of every interval via a sort-and-count sweep, O(n log n).

    Interval ``j`` misses interval ``i`` exactly when ``hi[i] < lo[j]`` or
    ``lo[i] > hi[j]``; both counts come from binary searches, so the result
    is an exact integer count identical to the all-pairs loop.
    """
    n = lo.size
    left = np.searchsorted(np.sort(hi), lo, side="left")
    right = n - np.searchsorted(np.sort(lo), hi, side="right")
    return (n - 1) - left - right


def _pairwise_adjacency(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    adj = np.maximum.outer(lo, lo) <= np.minimum.outer(hi, hi)
    np.fill_diagonal(adj, False)
    return adj


def degree_sequence(
    intervals: Sequence[Interval], method: str = "pairwise", adjacency: bool = False
) -> IntervalGraph:
    """Build the interval graph and return its degree sequence.

    Parameters
    ----------
    intervals : sequence of Interval
    method : {"pairwise", "sweep"}
        ``"pairwise"`` evaluates every pair; ``"sweep"`` counts
        non-intersections with binary searches.  Both give identical degrees.
    adjacency : bool
        Also keep the boolean adjacency matrix (forces the pairwise method).
    """
    if len(intervals) < 1:
        raise LengthError("need at least one interval")
    lo = np.array([iv.lo for iv in intervals], dtype=float)
    hi = np.array([iv.hi for iv in intervals], dtype=float)
    if method == "sweep" and not adjacency:
        return IntervalGraph(lo.size, degrees_from_endpoints(lo, hi))
    if method not in ("pairwise", "sweep"):
        raise ValueError(f"unknown method {method!r}")
    adj = _pairwise_adjacency(lo, hi)
    return IntervalGraph(lo.size, adj.sum(axis=1), adj if adjacency else None)


def random_disjoint_pairing(vertex_count: int, seed: SeedLike = None) -> Pairing:
    """Uniform perfect matching on ``range(vertex_count)``.

    A seeded uniform shuffle of the indices is cut into adjacent pairs.
    ``seed`` may also be a ``numpy.random.Generator`` whose stream is consumed.
    """
    if vertex_count < 2 or vertex_count % 2:
        raise LengthError(f"vertex count must be even and >= 2, got {vertex_count}")
    rng = as_generator(seed)
    perm = rng.permutation(vertex_count).reshape(-1, 2)
    pairs = tuple((int(a), int(b)) for a, b in perm)
    return Pairing(pairs, None if isinstance(seed, np.random.Generator) else seed)


def conditional_edge_probability(interval: Interval) -> float:
    """P(an independent interval with Uniform[0,1] endpoints meets ``interval``).

    The random interval misses ``[a, b]`` only if both its endpoints fall
    below ``a`` or both above ``b``.
    """
    a, b = interval.lo, interval.hi
    if a < 0.0 or b > 1.0:
        raise DomainError(f"interval endpoints must lie in [0, 1], got [{a}, {b}]")
    return 1.0 - a * a - (1.0 - b) ** 2
