"""RIG-DD: the degree-distribution randomness test.

The statistic compares the empirical degree CDF of the interval graph with
its limiting law.  Its null distribution has no closed form, so critical
values come from Monte-Carlo calibration on iid uniform series, either from
the bundled table or computed on demand and cached on disk.
"""
from __future__ import annotations

import csv
import math
import os
import tempfile
import threading
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from rigtest.degree import dd_distance, empirical_degree_cdf, theoretical_cdf_grid
from rigtest.errors import ConfigurationError, DomainError, InsufficientDataError, LengthError
from rigtest.graph import as_series, degrees_from_endpoints, interval_endpoints
from rigtest.seeding import derived_seed

__all__ = [
    "DEFAULT_K",
    "ThresholdEntry",
    "DdGroup",
    "DdReport",
    "ThresholdStore",
    "bundled_table",
    "default_cache_path",
    "dd_statistic",
    "null_statistics",
    "calibrate_threshold",
    "dd_test",
]

DEFAULT_K = 1000
TABLE_ALPHAS = (0.10, 0.05, 0.01)
CACHE_FIELDS = ("m", "alpha", "k", "seed", "c_alpha", "source")


@dataclass(frozen=True)
class ThresholdEntry:
    m: int
    alpha: float
    c_alpha: float
    k: int | None
    seed: int | None
    source: str  # "bundled-table" | "calibrated" | "user"


def dd_statistic(series) -> float:
    """Distance between empirical and limiting degree CDFs for ``2n`` values."""
    arr = as_series(series, min_length=4)
    if arr.size % 2:
        raise LengthError(f"series length must be even, got {arr.size}")
    lo, hi = interval_endpoints(arr)
    degrees = degrees_from_endpoints(lo, hi)
    return dd_distance((theoretical_cdf_grid(lo.size), empirical_degree_cdf(degrees)))


def _null_draw(rng: np.random.Generator, m: int, dist: str) -> np.ndarray:
    if dist == "uniform":
        return rng.random(m)
    if dist == "normal":
        return rng.standard_normal(m)
    raise DomainError(f"unknown calibration distribution {dist!r}")


def null_statistics(m: int, k: int = DEFAULT_K, seed: int = 0, dist: str = "uniform") -> np.ndarray:
    """RIG-DD statistics of ``k`` iid series of length ``m``.

    Replication ``i`` uses its own seed derived from ``(seed, i)``.
    """
    if m < 4 or m % 2:
        raise LengthError(f"calibration length must be even and >= 4, got {m}")
    if k < 1:
        raise DomainError("need at least one replication")
    out = np.empty(k)
    for i in range(k):
        rng = np.random.default_rng(derived_seed(seed, i))
        out[i] = dd_statistic(_null_draw(rng, m, dist))
    return out


def _nearest_rank(values: np.ndarray, alpha: float) -> float:
    k = values.size
    rank = max(1, math.ceil((1.0 - alpha) * k - 1e-9))
    return float(np.sort(values)[rank - 1])


def calibrate_threshold(
    m: int, alpha: float, k: int = DEFAULT_K, seed: int = 0, dist: str = "uniform"
) -> ThresholdEntry:
    """Monte-Carlo critical value: the ``ceil((1 - alpha) k)``-th smallest null D."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    stats = null_statistics(m, k, seed, dist)
    return ThresholdEntry(int(m), float(alpha), _nearest_rank(stats, alpha), int(k), int(seed), "calibrated")


def bundled_table() -> dict[tuple[int, float], float]:
    """Shipped critical values keyed by ``(m, alpha)``."""
    text = resources.files("rigtest").joinpath("data/thresholds_table.tsv").read_text()
    table = {}
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    for line in rows[1:]:
        m, *values = line.split("\t")
        for alpha, value in zip(TABLE_ALPHAS, values):
            table[(int(m), alpha)] = float(value)
    return table


def default_cache_path() -> Path:
    env = os.environ.get("RIGTEST_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "rigtest" / "thresholds.tsv"


def _alpha_key(alpha: float) -> float:
    return round(float(alpha), 10)


class ThresholdStore:
    """Resolve RIG-DD critical values for ``(m, alpha)``.

    Lookup order: the bundled table (exact ``(m, alpha)`` match), then
    thresholds already calibrated with this store's ``(k, seed)``, then a
    fresh calibration if ``calibrate`` is true.  Calibrated values are kept
    in memory and, when ``cache_path`` is set, in a tab-separated file.

    Parameters
    ----------
    cache_path : path-like, optional
        ``None`` keeps the cache in memory only.
    calibrate : bool
        Allow Monte-Carlo calibration for lengths missing from the table.
    k, seed : int
        Calibration replications and seed.
    use_table : bool
        Set to false to always calibrate.
    """

    def __init__(self, cache_path=None, calibrate: bool = True, k: int = DEFAULT_K,
                 seed: int = 0, use_table: bool = True):
        self.cache_path = Path(cache_path) if cache_path is not None else None
        self.calibrate = calibrate
        self.k = int(k)
        self.seed = int(seed)
        self.use_table = use_table
        self._table = bundled_table() if use_table else {}
        self._lock = threading.Lock()
        self._entries: dict[tuple, ThresholdEntry] = {}
        if self.cache_path is not None and self.cache_path.exists():
            for entry in read_cache(self.cache_path):
                self._entries[(entry.m, _alpha_key(entry.alpha), entry.k, entry.seed)] = entry

    def lookup(self, m: int, alpha: float) -> ThresholdEntry | None:
        key = (int(m), _alpha_key(alpha))
        for (tm, ta), value in self._table.items():
            if tm == key[0] and _alpha_key(ta) == key[1]:
                return ThresholdEntry(tm, float(alpha), value, None, None, "bundled-table")
        return self._entries.get(key + (self.k, self.seed))

    def resolve(self, m: int, alpha: float) -> ThresholdEntry:
        entry = self.lookup(m, alpha)
        if entry is not None:
            return entry
        if not self.calibrate:
            raise ConfigurationError(
                f"no threshold for m={m}, alpha={alpha} and calibration is disabled"
            )
        entry = calibrate_threshold(m, alpha, self.k, self.seed)
        with self._lock:
            self._entries[(entry.m, _alpha_key(alpha), entry.k, entry.seed)] = entry
            if self.cache_path is not None:
                write_cache(self.cache_path, self._entries.values())
        return entry

    def entries(self) -> list[ThresholdEntry]:
        return list(self._entries.values())


def read_cache(path) -> list[ThresholdEntry]:
    entries = []
    with open(path, newline="") as fh:
        rows = csv.DictReader((ln for ln in fh if not ln.startswith("#")), delimiter="\t")
        for row in rows:
            entries.append(ThresholdEntry(
                int(row["m"]), float(row["alpha"]), float(row["c_alpha"]),
                int(row["k"]), int(row["seed"]), row["source"],
            ))
    return entries


def write_cache(path, entries) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ordered = sorted(entries, key=lambda e: (e.m, e.alpha, e.k, e.seed))
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".thresholds-", suffix=".tsv")
    with os.fdopen(fd, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(CACHE_FIELDS)
        for e in ordered:
            writer.writerow([e.m, repr(e.alpha), e.k, e.seed, repr(e.c_alpha), e.source])
    # readers only ever see a complete file
    os.replace(tmp, path)


@dataclass(frozen=True)
class DdGroup:
    start: int
    n: int
    D: float


@dataclass(frozen=True)
class DdReport:
    m: int
    alpha: float
    groups: tuple[DdGroup, ...]
    threshold: ThresholdEntry
    reject: bool
    test: str = "rig_dd"

    @property
    def verdict(self) -> str:
        return "reject" if self.reject else "fail-to-reject"

    @property
    def statistics(self) -> tuple[float, ...]:
        return tuple(g.D for g in self.groups)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict
        return d


def dd_test(series, alpha: float = 0.05, thresholds=None) -> DdReport:
    """Run the RIG-DD test.

    Even ``m`` compares D with ``C_alpha``.  For ``m = 2n + 1`` the two
    windows ``y[0:2n]`` and ``y[1:2n+1]`` are each compared with
    ``C_{alpha/2}`` calibrated at length ``2n``; either exceeding it rejects.

    ``thresholds`` is a :class:`ThresholdStore`, a number used as the
    critical value directly, or ``None`` for the default store (bundled
    table plus a calibration cache at :func:`default_cache_path`).
    """
    arr = as_series(series)
    m = arr.size
    if m < 4:
        raise InsufficientDataError(f"RIG-DD needs at least 4 observations, got {m}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    width = 2 * (m // 2)
    level = alpha if width == m else alpha / 2.0
    if thresholds is None:
        thresholds = ThresholdStore(default_cache_path())
    if isinstance(thresholds, ThresholdStore):
        entry = thresholds.resolve(width, level)
    else:
        entry = ThresholdEntry(width, level, float(thresholds), None, None, "user")
    groups = tuple(
        DdGroup(start, width // 2, dd_statistic(arr[start : start + width]))
        for start in range(m - width + 1)
    )
    reject = any(g.D > entry.c_alpha for g in groups)
    return DdReport(m, alpha, groups, entry, reject)
