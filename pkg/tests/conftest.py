import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bpcs_video.synth import natural_frames  # noqa: E402

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        marker = _CRITERIA.get(report.nodeid)
        if marker is not None:
            number, title = marker
            _CRITERIA[report.nodeid] = (number, title, report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    rows = [v for v in _CRITERIA.values() if len(v) == 3]
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(rows):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def small_natural():
    """Four 64x48 RGB frames."""
    return natural_frames(count=4, height=48, width=64, seed=3)
