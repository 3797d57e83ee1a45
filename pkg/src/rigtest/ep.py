"""RIG-EP: the edge-probability randomness test.

Under independence two disjointly paired intervals fail to intersect with
probability 1/3, so the number of non-intersecting pairs among ``n`` random
disjoint pairs is Binomial(n, 1/3).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import norm

from rigtest.errors import DomainError, InsufficientDataError, LengthError
from rigtest.graph import Pairing, as_series, interval_endpoints, random_disjoint_pairing
from rigtest.seeding import SeedLike, as_generator

__all__ = [
    "NULL_P",
    "NORMAL_MIN_PAIRS",
    "ExactTestRegion",
    "EpGroup",
    "EpReport",
    "binomial_pmf",
    "exact_region",
    "ep_statistic",
    "ep_pvalue",
    "bh_adjust",
    "ep_test",
]

NULL_P = 1.0 / 3.0
# normal approximation from this many pairs up (n p >= 10 under the null)
NORMAL_MIN_PAIRS = 30


def binomial_pmf(n: int, p: float = NULL_P) -> np.ndarray:
    k = np.arange(n + 1)
    return np.array([math.comb(n, int(i)) for i in k], dtype=float) * p**k * (1.0 - p) ** (n - k)


def _symmetric_region(n: int, t: int) -> list[int]:
    """Outcomes ``{0..t-1} U {n-t+1..n}``."""
    return sorted(set(range(0, min(t, n + 1))) | set(range(max(n - t + 1, 0), n + 1)))


@dataclass(frozen=True)
class ExactTestRegion:
    """Randomized level-``alpha`` test of p = 1/3 for ``n`` pairs.

    Reject outright when the count is in ``K1``; reject with probability
    ``gamma`` when it is in ``K2``.
    """

    n: int
    alpha: float
    K1: frozenset
    K2: frozenset
    gamma: float

    def size(self) -> float:
        pmf = binomial_pmf(self.n)
        return float(sum(pmf[k] for k in self.K1) + self.gamma * sum(pmf[k] for k in self.K2))

    def rejection_probability(self, count: int) -> float:
        if count in self.K1:
            return 1.0
        if count in self.K2:
            return self.gamma
        return 0.0


def exact_region(n: int, alpha: float) -> ExactTestRegion:
    """Build the symmetric-pair randomized region.

    Outcomes are added from both tails inward, two at a time (``t`` and
    ``n - t``).  ``K1`` is the largest such region with null probability at
    most ``alpha``; the next pair becomes ``K2``, rejected with the
    probability that tops the size up to exactly ``alpha``.
    """
    if n < 1:
        raise DomainError("need at least one pair")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    pmf = binomial_pmf(n)
    t, mass = 0, 0.0
    while True:
        step = sorted({t, n - t})
        step_mass = float(sum(pmf[k] for k in step))
        if mass + step_mass > alpha:
            break
        mass += step_mass
        t += 1
    k1 = frozenset(_symmetric_region(n, t))
    k2 = frozenset({t, n - t})
    gamma = (alpha - mass) / step_mass
    return ExactTestRegion(n, alpha, k1, k2, gamma)


def ep_statistic(series, seed: SeedLike = None, pairing: Pairing | None = None) -> tuple[float, int]:
    """Fraction of non-intersecting pairs among ``n`` random disjoint pairs.

    ``series`` holds ``4n`` values, giving ``2n`` intervals.  A fixed
    ``pairing`` overrides the seeded draw.

    Returns
    -------
    p_hat : float
    n : int
        Number of pairs.
    """
    arr = as_series(series, min_length=4)
    if arr.size % 4:
        raise LengthError(f"series length must be a multiple of 4, got {arr.size}")
    lo, hi = interval_endpoints(arr)
    if pairing is None:
        pairing = random_disjoint_pairing(lo.size, seed)
    idx = pairing.as_array()
    if idx.shape[0] * 2 != lo.size or np.unique(idx).size != lo.size:
        raise LengthError("pairing must be a perfect matching on the intervals")
    a, b = idx[:, 0], idx[:, 1]
    disjoint = np.maximum(lo[a], lo[b]) > np.minimum(hi[a], hi[b])
    return float(disjoint.mean()), int(idx.shape[0])


def ep_pvalue(count: int, n: int) -> float:
    """Two-sided p-value for ``count`` non-intersecting pairs out of ``n``.

    Exact for ``n < 30``: the null mass of the smallest symmetric-pair region
    that contains ``count``.  Normal approximation otherwise.
    """
    if n < 1 or not 0 <= count <= n:
        raise DomainError(f"count must lie in [0, {n}], got {count}")
    if n < NORMAL_MIN_PAIRS:
        t = min(count, n - count)
        pmf = binomial_pmf(n)
        return min(1.0, float(sum(pmf[k] for k in _symmetric_region(n, t + 1))))
    z = abs(count / n - NULL_P) / math.sqrt(2.0 / (9.0 * n))
    return float(min(1.0, 2.0 * norm.sf(z)))


def bh_adjust(pvalues) -> np.ndarray:
    """Benjamini-Hochberg step-up adjusted p-values, in input order."""
    p = np.asarray(pvalues, dtype=float)
    if p.ndim != 1:
        raise DomainError("p-values must be one-dimensional")
    if np.any((p < 0.0) | (p > 1.0)) or np.any(np.isnan(p)):
        raise DomainError("p-values must lie in [0, 1]")
    m = p.size
    if m == 0:
        return p.copy()
    order = np.argsort(p, kind="stable")
    scaled = p[order] * m / np.arange(1, m + 1)
    adjusted = np.minimum(1.0, np.minimum.accumulate(scaled[::-1])[::-1])
    out = np.empty(m)
    out[order] = adjusted
    return out


@dataclass(frozen=True)
class EpGroup:
    start: int
    n: int
    count: int
    p_hat: float
    p_value: float
    # randomized-test rejection probability; only set on the exact branch
    phi: float | None = None


@dataclass(frozen=True)
class EpReport:
    m: int
    alpha: float
    seed: object
    groups: tuple[EpGroup, ...]
    adjusted_p: tuple[float, ...]
    reject: bool
    test: str = field(default="rig_ep", init=False)

    @property
    def verdict(self) -> str:
        return "reject" if self.reject else "fail-to-reject"

    @property
    def min_adjusted_p(self) -> float:
        return min(self.adjusted_p)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict
        d["seed"] = self.seed if isinstance(self.seed, (int, type(None))) else repr(self.seed)
        return d


def ep_test(series, alpha: float = 0.05, seed: SeedLike = None, randomize: bool = False) -> EpReport:
    """Run the RIG-EP test on ``m`` observations.

    For ``m = 4n + k`` with ``k > 0`` the test runs on the ``k + 1``
    overlapping windows of length ``4n``; their p-values are BH-adjusted and
    the null is rejected when the smallest adjusted p-value is ``<= alpha``.
    Windows draw their pairings from one seeded stream in window order.

    With ``randomize=True`` and a single window on the exact branch
    (``n < 30``), the decision is the randomized exact-size test instead:
    reject with probability ``phi`` from :func:`exact_region`, using a draw
    from the same seeded stream.
    """
    arr = as_series(series)
    m = arr.size
    if m < 8:
        raise InsufficientDataError(f"RIG-EP needs at least 8 observations, got {m}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    width = 4 * (m // 4)
    rng = as_generator(seed)
    groups = []
    for start in range(m - width + 1):
        p_hat, n = ep_statistic(arr[start : start + width], seed=rng)
        count = int(round(p_hat * n))
        phi = exact_region(n, alpha).rejection_probability(count) if n < NORMAL_MIN_PAIRS else None
        groups.append(EpGroup(start, n, count, p_hat, ep_pvalue(count, n), phi))
    adjusted = bh_adjust([g.p_value for g in groups])
    reject = bool(adjusted.min() <= alpha)
    if randomize and len(groups) == 1 and groups[0].phi is not None:
        reject = bool(rng.random() < groups[0].phi)
    return EpReport(m, alpha, seed, tuple(groups), tuple(float(a) for a in adjusted), reject)
