import os
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]

# (criterion, passed, detail) rows printed after the run
CRITERIA: list[tuple[str, bool, str]] = []

EXAMPLE1 = [13, 73, 89, 78, 21, 51, 95, 8, 85, 80, 39, 43, 15, 33, 1, 11, 31, 87, 36, 19]


def data_file(name: str) -> Path:
    """Location of a real dataset: $RIGTEST_DATA, else <repo>/data."""
    base = Path(os.environ.get("RIGTEST_DATA", ROOT / "data"))
    return base / name


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("RIGTEST_CACHE", str(tmp_path / "thresholds.tsv"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def record():
    def _record(name: str, ok: bool, detail: str = "") -> bool:
        CRITERIA.append((name, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
