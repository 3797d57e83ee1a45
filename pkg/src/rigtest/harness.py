"""Series ingestion, power studies and the real-data case studies."""
from __future__ import annotations

import configparser
import csv
import io
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import norm

from rigtest import __version__
from rigtest.baselines import bds_test, runs_test
from rigtest.datagen import KINDS, ProcessSpec, generate, iid, permute
from rigtest.dd import DEFAULT_K, ThresholdStore, dd_test, default_cache_path
from rigtest.ep import ep_test
from rigtest.errors import ConfigurationError, InputError, RigTestError
from rigtest.seeding import derived_seed

__all__ = [
    "TESTS",
    "MISSING_TOKENS",
    "ingest_series",
    "CellSpec",
    "PowerStudyConfig",
    "PowerStudyResult",
    "load_config",
    "run_power_study",
    "REFERENCE",
    "repro_case_study",
    "write_json",
]

TESTS = ("rig_ep", "rig_dd", "runs", "bds")
MISSING_TOKENS = {"na", "nan", "n/a", "."}
CSV_FIELDS = ("process", "param", "test", "m", "alpha", "replications", "rejection_rate")


def _parse_token(token: str) -> float | None:
    if token.strip().lower() in MISSING_TOKENS:
        return None
    return float(token)


def _is_number(token: str) -> bool:
    try:
        _parse_token(token)
    except ValueError:
        return False
    return True


def ingest_series(path, missing_policy: str = "drop", column: int | str | None = None) -> np.ndarray:
    """Read a numeric series from a whitespace- or comma-delimited text file.

    Lines starting with ``#`` are skipped.  A first line made only of
    non-numeric tokens is taken as a header of column names.  Without
    ``column`` every token is read in row-major order; with it, one column is
    picked by 0-based index or header name.  ``NA``/``nan`` tokens are
    dropped (``missing_policy="drop"``) or rejected (``"fail"``).
    """
    if missing_policy not in ("drop", "fail"):
        raise ConfigurationError(f"missing policy must be 'drop' or 'fail', got {missing_policy!r}")
    rows = []
    with open(path) as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            rows.append(stripped.replace(",", " ").split())
    header = None
    if rows and not any(_is_number(t) for t in rows[0]):
        header, rows = rows[0], rows[1:]

    if column is None:
        tokens = [t for row in rows for t in row]
    else:
        if isinstance(column, str) and not column.lstrip("-").isdigit():
            if header is None or column not in header:
                raise ConfigurationError(f"column {column!r} not found in header {header}")
            idx = header.index(column)
        else:
            idx = int(column)
        try:
            tokens = [row[idx] for row in rows]
        except IndexError:
            raise InputError(f"column {column} is out of range for {path}") from None

    values = []
    for lineno, token in enumerate(tokens, 1):
        try:
            value = _parse_token(token)
        except ValueError:
            raise InputError(f"unparseable token {token!r} (item {lineno}) in {path}") from None
        if value is None or not math.isfinite(value):
            if missing_policy == "fail":
                raise InputError(f"missing value {token!r} (item {lineno}) in {path}")
            continue
        values.append(value)
    if not values:
        raise InputError(f"no numeric values in {path}")
    return np.asarray(values, dtype=float)


# ---------------------------------------------------------------- power study


@dataclass(frozen=True)
class CellSpec:
    """One grid cell: a process (or a permuted iid base series) at one length."""

    process: ProcessSpec | None = None
    # permutation cells: shuffle one fixed iid series of this distribution
    permute_dist: str | None = None
    base_seed: int = 0
    m: int = 0

    @property
    def length(self) -> int:
        return self.process.m if self.process is not None else self.m

    @property
    def name(self) -> str:
        return self.process.kind if self.process is not None else f"perm_{self.permute_dist}"

    @property
    def param(self) -> str:
        if self.process is not None:
            return self.process.label()
        return f"base_seed={self.base_seed}"


@dataclass
class PowerStudyConfig:
    cells: list[CellSpec]
    tests: tuple[str, ...] = ("rig_ep", "rig_dd", "runs", "bds")
    replications: int = 500
    alpha: float = 0.05
    seed: int = 0
    output: str | None = None
    calibration_k: int = DEFAULT_K
    calibration_seed: int = 0
    cache_path: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigurationError("replications must be >= 1")
        if not self.cells:
            raise ConfigurationError("the process grid is empty")
        bad = [t for t in self.tests if t not in TESTS]
        if bad or not self.tests:
            raise ConfigurationError(f"tests must be a non-empty subset of {TESTS}, got {self.tests}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError("alpha must lie in (0, 1)")


@dataclass
class PowerRow:
    process: str
    param: str
    test: str
    m: int
    alpha: float
    replications: int
    rejections: int
    errors: int
    elapsed: float

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.replications


@dataclass
class PowerStudyResult:
    config: PowerStudyConfig
    rows: list[PowerRow] = field(default_factory=list)
    thresholds: list = field(default_factory=list)

    def rate(self, process: str, test: str, param: str | None = None, m: int | None = None) -> float:
        hits = [r for r in self.rows if r.process == process and r.test == test
                and (param is None or r.param == param) and (m is None or r.m == m)]
        if len(hits) != 1:
            raise KeyError(f"{len(hits)} rows match {(process, test, param, m)}")
        return hits[0].rejection_rate

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for r in self.rows:
            writer.writerow([r.process, r.param, r.test, r.m, repr(r.alpha), r.replications,
                             repr(r.rejection_rate)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "software": {"package": "rigtest", "version": __version__},
            "config": {
                "tests": list(cfg.tests), "replications": cfg.replications, "alpha": cfg.alpha,
                "seed": cfg.seed, "calibration_k": cfg.calibration_k,
                "calibration_seed": cfg.calibration_seed,
            },
            "thresholds": [asdict(t) for t in self.thresholds],
            "rows": [dict(asdict(r), rejection_rate=r.rejection_rate) for r in self.rows],
        }


def _sweep_values(raw: str) -> list:
    out = []
    for tok in raw.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            out.append(float(tok))
        except ValueError:
            out.append(tok)
    return out


def load_config(path) -> PowerStudyConfig:
    """Parse an INI-style study file.

    ``[study]`` holds the global settings; each ``[process NAME]`` section
    names a ``kind``, one or more lengths ``m`` and comma-separated parameter
    values, combined by ``sweep = product`` (default) or ``zip``.
    ``[permutation NAME]`` sections give ``dist``, ``m`` and ``base_seed``.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";",))
    if not parser.read(path):
        raise ConfigurationError(f"cannot read config {path}")
    if not parser.has_section("study"):
        raise ConfigurationError("config needs a [study] section")
    study = parser["study"]
    cells: list[CellSpec] = []
    for section in parser.sections():
        sec = parser[section]
        if section.startswith("process"):
            kind = sec.get("kind")
            if kind not in KINDS:
                raise ConfigurationError(f"[{section}] unknown kind {kind!r}")
            lengths = [int(v) for v in _sweep_values(sec.get("m", ""))]
            if not lengths:
                raise ConfigurationError(f"[{section}] needs m")
            names = [k for k in sec if k in KINDS[kind]]
            values = [_sweep_values(sec[k]) for k in names]
            if any(not v for v in values):
                raise ConfigurationError(f"[{section}] has an empty parameter sweep")
            mode = sec.get("sweep", "product")
            if mode == "zip":
                if len({len(v) for v in values}) > 1:
                    raise ConfigurationError(f"[{section}] zip sweep needs equal-length lists")
                combos = list(zip(*values))
            elif mode == "product":
                combos = list(itertools.product(*values))
            else:
                raise ConfigurationError(f"[{section}] sweep must be product or zip")
            for m in lengths:
                for combo in combos:
                    cells.append(CellSpec(ProcessSpec(kind, m, dict(zip(names, combo)))))
        elif section.startswith("permutation"):
            for m in _sweep_values(sec.get("m", "")):
                cells.append(CellSpec(None, sec.get("dist", "uniform01"), sec.getint("base_seed", 0), int(m)))
        elif section != "study":
            raise ConfigurationError(f"unknown section [{section}]")

    tests = tuple(t.strip() for t in study.get("tests", ",".join(TESTS)).split(",") if t.strip())
    output = study.get("output")
    if output is not None and not Path(output).is_absolute():
        output = str(Path(path).parent / output)
    return PowerStudyConfig(
        cells=cells, tests=tests, replications=study.getint("replications", 500),
        alpha=study.getfloat("alpha", 0.05), seed=study.getint("seed", 0), output=output,
        calibration_k=study.getint("calibration_k", DEFAULT_K),
        calibration_seed=study.getint("calibration_seed", 0),
        cache_path=study.get("cache"), jobs=study.getint("jobs", 1),
    )


def _cell_series(cell: CellSpec, seed: int, index: int, rep: int) -> np.ndarray:
    if cell.process is not None:
        return generate(cell.process.with_seed(derived_seed(seed, index, rep, 0)))
    base = iid(cell.permute_dist, cell.m, cell.base_seed)
    return permute(base, derived_seed(seed, index, rep, 0))


def _replicate(args) -> list[tuple[bool, bool]]:
    """(reject, errored) per test for one replication of one cell."""
    cell, index, rep, tests, alpha, seed, thresholds = args
    y = _cell_series(cell, seed, index, rep)
    out = []
    for test in tests:
        try:
            if test == "rig_ep":
                verdict = ep_test(y, alpha, seed=derived_seed(seed, index, rep, 1)).reject
            elif test == "rig_dd":
                verdict = dd_test(y, alpha, thresholds=thresholds).reject
            elif test == "runs":
                verdict = runs_test(y).rejects(alpha)
            else:
                verdict = bds_test(y).rejects(alpha)
            out.append((bool(verdict), False))
        except RigTestError:
            # an undefined statistic (e.g. constant series) counts as no rejection
            out.append((False, True))
    return out


def run_power_study(config: PowerStudyConfig, progress=None) -> PowerStudyResult:
    """Rejection frequencies for every (cell, test) pair in ``config``.

    Replication ``r`` of cell ``c`` draws its data from a seed derived from
    ``(config.seed, c, r)``, so results do not depend on execution order or
    on ``jobs``.  RIG-DD thresholds are resolved once per length up front.
    """
    store = ThresholdStore(config.cache_path, k=config.calibration_k, seed=config.calibration_seed)
    fixed: dict[int, object] = {}
    entries = []
    if "rig_dd" in config.tests:
        for cell in config.cells:
            m = cell.length
            if m in fixed:
                continue
            width = 2 * (m // 2)
            entry = store.resolve(width, config.alpha if width == m else config.alpha / 2)
            fixed[m] = entry.c_alpha
            entries.append(entry)

    result = PowerStudyResult(config, thresholds=entries)
    pool = ProcessPoolExecutor(config.jobs) if config.jobs > 1 else None
    try:
        for index, cell in enumerate(config.cells):
            start = time.perf_counter()
            jobs = [(cell, index, rep, config.tests, config.alpha, config.seed, fixed.get(cell.length))
                    for rep in range(config.replications)]
            outcomes = list(pool.map(_replicate, jobs, chunksize=16) if pool else map(_replicate, jobs))
            elapsed = time.perf_counter() - start
            for t, test in enumerate(config.tests):
                rejections = sum(o[t][0] for o in outcomes)
                errors = sum(o[t][1] for o in outcomes)
                result.rows.append(PowerRow(cell.name, cell.param, test, cell.length, config.alpha,
                                            config.replications, rejections, errors, elapsed))
            if progress is not None:
                progress(index, cell)
    finally:
        if pool is not None:
            pool.shutdown()

    if config.output:
        out = Path(config.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.with_suffix(".csv").write_text(result.to_csv())
        write_json(result.to_dict(), out.with_suffix(".json"))
    return result


# ---------------------------------------------------------------- case studies

# reference values the case-study report prints next to the computed ones
REFERENCE = {
    "gnp": {
        "m": 176,
        "rig_ep": {"abs_dev": 0.2576, "cutoff": 0.1393, "verdict": "reject"},
        "rig_dd": {"D": [1.3604], "threshold": 0.7192, "verdict": "reject"},
        "runs": {"p_value": 0.00815, "verdict": "reject"},
    },
    "ibm": {
        "m": 9843,
        "rig_ep": {"verdict": "fail-to-reject"},
        "rig_dd": {"D": [0.8591, 1.1452], "threshold": 0.6516, "verdict": "reject"},
        "runs": {"p_value": 0.3973, "verdict": "fail-to-reject"},
    },
}


def _load_case(name: str, path, column) -> np.ndarray:
    if column is not None:
        return ingest_series(path, "drop", column)
    if name == "gnp":
        return ingest_series(path, "drop")
    # daily file: date column first, simple returns second (or a "rtn" header)
    try:
        return ingest_series(path, "drop", "rtn")
    except ConfigurationError:
        return ingest_series(path, "drop", 1)


def repro_case_study(name: str, path, alpha: float = 0.05, seed: int = 0,
                     thresholds: ThresholdStore | None = None, column=None) -> dict:
    """Run RIG-EP, RIG-DD and the runs test on a named real dataset."""
    if name not in REFERENCE:
        raise ConfigurationError(f"unknown case study {name!r}; expected one of {sorted(REFERENCE)}")
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    y = _load_case(name, path, column)
    if thresholds is None:
        thresholds = ThresholdStore(default_cache_path())
    ep = ep_test(y, alpha, seed=seed)
    dd = dd_test(y, alpha, thresholds=thresholds)
    runs = runs_test(y)
    n_pairs = ep.groups[0].n
    return {
        "dataset": name,
        "path": str(path),
        "m": int(y.size),
        "alpha": alpha,
        "seed": seed,
        "software": {"package": "rigtest", "version": __version__},
        "reference": REFERENCE[name],
        "rig_ep": dict(ep.to_dict(), abs_dev=[abs(g.p_hat - 1 / 3) for g in ep.groups],
                       cutoff=math.sqrt(2.0 / (9.0 * n_pairs)) * _z(alpha)),
        "rig_dd": dd.to_dict(),
        "runs": dict(runs.to_dict(), verdict="reject" if runs.rejects(alpha) else "fail-to-reject"),
    }


def _z(alpha: float) -> float:
    return float(norm.isf(alpha / 2.0))


def json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.ndarray, frozenset, set)):
        return sorted(obj.tolist()) if isinstance(obj, np.ndarray) else sorted(obj)
    if isinstance(obj, Path):
        return str(obj)
    return repr(obj)


def write_json(data: dict, path) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True, default=json_default) + "\n")
