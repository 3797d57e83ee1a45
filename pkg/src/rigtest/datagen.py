"""Seeded generators for the processes used in the power studies."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from rigtest.errors import ParameterError
from rigtest.seeding import SeedLike, as_generator

__all__ = [
    "KINDS",
    "IID_DISTS",
    "ProcessSpec",
    "generate",
    "iid",
    "permute",
]

BURN_IN = 500
LOGISTIC_BURN_IN = 1000
VARIANCE_FLOOR = 1e-6
LOGISTIC_EDGE = 1e-9
LOGISTIC_RESAMPLE = 100

IID_DISTS = ("uniform01", "normal", "beta23", "cauchy")

# parameter names and defaults per process kind
KINDS: dict[str, dict[str, float | str]] = {
    "iid": {"dist": "normal"},
    "ar1": {"rho": 0.0},
    "ar2": {"rho1": 0.0, "rho2": 0.0},
    "ma1": {"psi": 0.0},
    "arma21": {"rho1": 0.0, "rho2": 0.0, "psi": 0.15},
    "arch1": {"alpha": 0.0},
    "garch11": {"alpha": 0.0, "beta": 0.0},
    "logistic": {"a": 4.0, "x0": 0.4, "s": 0.001, "burnin": LOGISTIC_BURN_IN},
}


@dataclass(frozen=True)
class ProcessSpec:
    """A data-generating process: ``kind``, its parameters, length and seed."""

    kind: str
    m: int
    params: dict = field(default_factory=dict)
    seed: SeedLike = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown process kind {self.kind!r}; expected one of {sorted(KINDS)}")
        unknown = set(self.params) - set(KINDS[self.kind])
        if unknown:
            raise ParameterError(f"unknown parameters for {self.kind}: {sorted(unknown)}")
        if int(self.m) < 1:
            raise ParameterError("length must be positive")
        merged = {**KINDS[self.kind], **self.params}
        object.__setattr__(self, "params", merged)
        _validate(self.kind, merged)

    def with_seed(self, seed: SeedLike) -> "ProcessSpec":
        return ProcessSpec(self.kind, self.m, dict(self.params), seed)

    def label(self) -> str:
        shown = {k: v for k, v in self.params.items() if k not in ("x0", "s", "burnin")}
        return ";".join(f"{k}={v}" for k, v in shown.items())


def _validate(kind: str, p: dict) -> None:
    if kind == "iid" and p["dist"] not in IID_DISTS:
        raise ParameterError(f"unknown distribution {p['dist']!r}")
    if kind == "ar1" and not -1.0 < p["rho"] < 1.0:
        raise ParameterError("AR(1) needs -1 < rho < 1")
    if kind in ("ar2", "arma21"):
        r1, r2 = p["rho1"], p["rho2"]
        if not (abs(r2) < 1.0 and r1 + r2 < 1.0 and r2 - r1 < 1.0):
            raise ParameterError(f"AR(2) part is not stationary for rho=({r1}, {r2})")
    if kind in ("arch1", "garch11") and p["alpha"] < 0.0:
        raise ParameterError("ARCH coefficient must be nonnegative")
    if kind == "garch11" and p["beta"] < 0.0:
        raise ParameterError("GARCH coefficient must be nonnegative")
    if kind == "logistic":
        if not 0.0 < p["a"] <= 4.0:
            raise ParameterError("logistic map needs 0 < a <= 4")
        if not 0.0 < p["x0"] < 1.0:
            raise ParameterError("logistic map needs x0 in (0, 1)")
        if p["s"] < 0.0:
            raise ParameterError("noise scale must be nonnegative")
        if int(p["burnin"]) < 0:
            raise ParameterError("burn-in must be nonnegative")


def iid(dist: str, m: int, seed: SeedLike = None) -> np.ndarray:
    rng = as_generator(seed)
    if dist == "uniform01":
        return rng.random(m)
    if dist == "normal":
        return rng.standard_normal(m)
    if dist == "beta23":
        return rng.beta(2.0, 3.0, m)
    if dist == "cauchy":
        return rng.standard_cauchy(m)
    raise ParameterError(f"unknown distribution {dist!r}")


def _linear(rng, m: int, ar: tuple, ma: tuple) -> np.ndarray:
    e = rng.standard_normal(m + BURN_IN)
    y = lfilter(np.r_[1.0, ma], np.r_[1.0, -np.asarray(ar, dtype=float)], e)
    return y[BURN_IN:]


def _garch(rng, m: int, alpha: float, beta: float) -> np.ndarray:
    eps = rng.standard_normal(m + BURN_IN)
    out = np.empty(m + BURN_IN)
    var, prev = VARIANCE_FLOOR, 0.0
    for t in range(m + BURN_IN):
        var = VARIANCE_FLOOR + alpha * prev * prev + beta * var
        prev = np.sqrt(var) * eps[t]
        out[t] = prev
    return out[BURN_IN:]


def _logistic(rng, m: int, a: float, x0: float, s: float, burnin: int) -> np.ndarray:
    total = m + burnin
    noise = s * rng.standard_normal(total) if s > 0.0 else np.zeros(total)
    out = np.empty(total)
    x = x0
    for t in range(total):
        base = a * x * (1.0 - x)
        nxt = base + noise[t]
        tries = 1
        # noise that leaves (0, 1) is redrawn; a = 4 orbits escape otherwise
        while s > 0.0 and not 0.0 < nxt < 1.0 and tries < LOGISTIC_RESAMPLE:
            nxt = base + s * rng.standard_normal()
            tries += 1
        if s > 0.0 and not 0.0 < nxt < 1.0:
            nxt = min(max(nxt, LOGISTIC_EDGE), 1.0 - LOGISTIC_EDGE)
        x = nxt
        out[t] = x
    return out[burnin:]


def generate(spec: ProcessSpec) -> np.ndarray:
    """Draw ``spec.m`` observations of the process described by ``spec``."""
    rng = as_generator(spec.seed)
    p, m = spec.params, int(spec.m)
    if spec.kind == "iid":
        return iid(p["dist"], m, rng)
    if spec.kind == "ar1":
        return _linear(rng, m, (p["rho"],), ())
    if spec.kind == "ar2":
        return _linear(rng, m, (p["rho1"], p["rho2"]), ())
    if spec.kind == "ma1":
        return _linear(rng, m, (), (p["psi"],))
    if spec.kind == "arma21":
        return _linear(rng, m, (p["rho1"], p["rho2"]), (p["psi"],))
    if spec.kind == "arch1":
        return _garch(rng, m, p["alpha"], 0.0)
    if spec.kind == "garch11":
        return _garch(rng, m, p["alpha"], p["beta"])
    return _logistic(rng, m, p["a"], p["x0"], p["s"], int(p["burnin"]))


def permute(series, seed: SeedLike = None) -> np.ndarray:
    arr = np.asarray(series)
    if arr.size == 0:
        raise ParameterError("cannot permute an empty series")
    return as_generator(seed).permutation(arr)
