"""Comparison tests: the Wald-Wolfowitz runs test and the BDS test."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import norm

from rigtest.errors import DataError, DomainError, LengthError
from rigtest.graph import as_series

__all__ = [
    "BaselineReport",
    "runs_test",
    "correlation_integral",
    "correlation_integrals",
    "bds_test",
]

BDS_DIM = 4
BDS_EPS_FACTOR = 0.5


@dataclass(frozen=True)
class BaselineReport:
    test: str
    statistic: float
    p_value: float
    parameters: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def rejects(self, alpha: float) -> bool:
        return self.p_value <= alpha

    def to_dict(self) -> dict:
        return asdict(self)


def runs_test(series) -> BaselineReport:
    """Wald-Wolfowitz runs test about the sample median.

    Values equal to the median are dropped; the run count is referred to its
    normal approximation (no continuity correction), two-sided.
    """
    x = as_series(series, min_length=2)
    med = float(np.median(x))
    above = x[x != med] > med
    n1 = int(above.sum())
    n2 = int(above.size - n1)
    if n1 == 0 or n2 == 0:
        raise DataError("runs test needs values on both sides of the median")
    runs = 1 + int(np.count_nonzero(above[1:] != above[:-1]))
    total = n1 + n2
    mean = 2.0 * n1 * n2 / total + 1.0
    var = 2.0 * n1 * n2 * (2.0 * n1 * n2 - total) / (total**2 * (total - 1.0))
    if var <= 0.0:
        raise DataError("too few values on each side of the median")
    z = (runs - mean) / math.sqrt(var)
    return BaselineReport(
        "runs", float(z), float(min(1.0, 2.0 * norm.sf(abs(z)))),
        {"threshold": "median"},
        {"runs": runs, "n_above": n1, "n_below": n2, "median": med},
    )


def _close_matrix(x: np.ndarray, eps: float) -> np.ndarray:
    return np.abs(x[:, None] - x[None, :]) < eps


def _embedded_close(close: np.ndarray, dim: int, n_vectors: int) -> np.ndarray:
    """Sup-norm closeness of the last ``n_vectors`` delay vectors of length ``dim``.

    Vector ``t`` ends at observation ``t``: ``(x[t-dim+1], ..., x[t])``.
    """
    total = close.shape[0]
    first = total - n_vectors
    out = close[first:, first:].copy()
    for lag in range(1, dim):
        out &= close[first - lag : total - lag, first - lag : total - lag]
    return out


def _pair_fraction(mat: np.ndarray) -> float:
    n = mat.shape[0]
    if n < 2:
        raise LengthError("need at least two embedded vectors")
    off = np.count_nonzero(mat) - np.count_nonzero(np.diagonal(mat))
    return off / (n * (n - 1))


def correlation_integral(series, eps: float, dim: int = 1) -> float:
    """Fraction of pairs of ``dim``-delay vectors within sup-norm distance ``eps``.

    Uses all ``len(series) - dim + 1`` vectors.
    """
    x = as_series(series, min_length=2)
    if dim < 1:
        raise DomainError("embedding dimension must be >= 1")
    close = _close_matrix(x, eps)
    return _pair_fraction(_embedded_close(close, dim, x.size - dim + 1))


def correlation_integrals(series, eps: float, max_dim: int) -> np.ndarray:
    """``C_d(eps)`` for ``d = 1..max_dim`` on one common set of vectors.

    Every dimension is evaluated on the ``len(series) - max_dim + 1`` vectors
    ending at the same observations, which makes the sequence nonincreasing
    in ``d``.
    """
    x = as_series(series, min_length=max_dim + 1)
    if max_dim < 1:
        raise DomainError("embedding dimension must be >= 1")
    close = _close_matrix(x, eps)
    n_vectors = x.size - max_dim + 1
    return np.array([_pair_fraction(_embedded_close(close, d, n_vectors)) for d in range(1, max_dim + 1)])


def bds_test(series, dim: int = BDS_DIM, eps_factor: float = BDS_EPS_FACTOR) -> BaselineReport:
    """BDS test of iid against any dependence, at a single embedding dimension.

    ``eps`` is ``eps_factor`` times the sample standard deviation.  The
    statistic is ``sqrt(n) (C_dim - C_1**dim) / sigma_dim`` with ``C_1`` and
    ``C_dim`` on the same ``n = m - dim + 1`` vectors and the asymptotic
    variance built from the full-sample ``C_1`` and triple-overlap ``K``.
    """
    x = as_series(series)
    if x.size < 50:
        raise LengthError(f"BDS test needs at least 50 observations, got {x.size}")
    if dim < 2:
        raise DomainError("BDS embedding dimension must be >= 2")
    sd = float(np.std(x, ddof=1))
    if sd == 0.0:
        raise DataError("BDS test is undefined for a constant series")
    eps = eps_factor * sd
    close = _close_matrix(x, eps)
    total = x.size
    c1_full = _pair_fraction(close)
    counts = close.sum(axis=1).astype(float) - 1.0  # drop self
    k = float(np.sum(counts * (counts - 1.0))) / (total * (total - 1.0) * (total - 2.0))

    n = total - dim + 1
    c1 = _pair_fraction(_embedded_close(close, 1, n))
    cm = _pair_fraction(_embedded_close(close, dim, n))

    tail = sum(k ** (dim - j) * c1_full ** (2 * j) for j in range(1, dim))
    var = 4.0 * (
        k**dim + 2.0 * tail + (dim - 1) ** 2 * c1_full ** (2 * dim)
        - dim**2 * k * c1_full ** (2 * dim - 2)
    )
    if var <= 0.0:
        raise DataError("BDS variance estimate is not positive")
    z = math.sqrt(n) * (cm - c1**dim) / math.sqrt(var)
    return BaselineReport(
        "bds", float(z), float(min(1.0, 2.0 * norm.sf(abs(z)))),
        {"dim": dim, "eps_factor": eps_factor, "eps": eps},
        {"c1": c1, "c_dim": cm, "c1_full": c1_full, "k": k},
    )
