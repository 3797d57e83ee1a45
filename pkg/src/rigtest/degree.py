"""Limiting degree law of a random interval graph and the RIG-DD distance."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from rigtest.errors import DomainError, ShapeError
from rigtest.graph import IntervalGraph

__all__ = [
    "DegreeCdfPair",
    "theoretical_degree_cdf",
    "theoretical_cdf_grid",
    "empirical_degree_cdf",
    "degree_cdf_pair",
    "dd_distance",
]


@dataclass(frozen=True)
class DegreeCdfPair:
    n: int
    theoretical: np.ndarray
    empirical: np.ndarray


def _cdf_lower(x):
    # x < 1/2 branch; arccos argument may drift past 1 near x = 1/2
    arg = np.clip(1.0 / np.sqrt(2.0 - 2.0 * x), -1.0, 1.0)
    return 1.0 - (1.0 - x) * (np.pi / 2.0 - 2.0 * np.arccos(arg)) - np.sqrt(1.0 - 2.0 * x)


def _cdf_upper(x):
    return 1.0 - (1.0 - x) * (np.pi / 2.0)


def theoretical_degree_cdf(x):
    """Limiting CDF of ``degree / n`` for a vertex of a random interval graph.

    Accepts a scalar or an array of points in ``[0, 1]``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
        raise DomainError("degree CDF is defined on [0, 1]")
    lower = arr < 0.5
    out = np.where(lower, _cdf_lower(np.where(lower, arr, 0.0)), _cdf_upper(arr))
    # pin the endpoints against rounding: F(0) = 0, F(1) = 1
    out = np.where(arr == 0.0, 0.0, np.where(arr == 1.0, 1.0, out))
    if np.ndim(x) == 0:
        return float(out)
    return out


@lru_cache(maxsize=64)
def _grid_cached(n: int) -> np.ndarray:
    grid = theoretical_degree_cdf(np.arange(1, n + 1) / n)
    grid.setflags(write=False)
    return grid


def theoretical_cdf_grid(n: int) -> np.ndarray:
    """``F*(i/n)`` for ``i = 1..n`` (read-only, cached per ``n``)."""
    if n < 1:
        raise DomainError("grid size must be positive")
    return _grid_cached(int(n))


def empirical_degree_cdf(graph: IntervalGraph | np.ndarray) -> np.ndarray:
    """Fraction of vertices with degree ``<= i``, for ``i = 1..n``."""
    degrees = graph.degrees if isinstance(graph, IntervalGraph) else np.asarray(graph)
    n = degrees.size
    if n < 1:
        raise DomainError("graph has no vertices")
    counts = np.bincount(degrees, minlength=n + 1)[: n + 1]
    # element i holds #{d_j <= i}; index 0 (d <= 0) is dropped from the grid
    return np.cumsum(counts)[1:] / n


def degree_cdf_pair(graph: IntervalGraph) -> DegreeCdfPair:
    return DegreeCdfPair(graph.n, theoretical_cdf_grid(graph.n), empirical_degree_cdf(graph))


def dd_distance(pair: DegreeCdfPair | tuple) -> float:
    """Sum of squared root-CDF gaps over the grid, scaled by ``1/sqrt(2)``.

    ``pair`` is a :class:`DegreeCdfPair` or a ``(theoretical, empirical)``
    tuple of equal-length arrays.
    """
    if isinstance(pair, DegreeCdfPair):
        theo, emp = pair.theoretical, pair.empirical
    else:
        theo, emp = pair
    theo = np.asarray(theo, dtype=float)
    emp = np.asarray(emp, dtype=float)
    if theo.shape != emp.shape:
        raise ShapeError(f"CDF length mismatch: {theo.shape} vs {emp.shape}")
    return float(np.sum((np.sqrt(emp) - np.sqrt(theo)) ** 2) / math.sqrt(2.0))
