import time
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
SUITE_BUDGET_S = 60.0

_results: dict[str, str] = {}
_started = time.perf_counter()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        previous = _results.get(label, "PASS")
        _results[label] = "PASS" if previous == "PASS" and report.passed else "FAIL"


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _started
    session.config._idcorr_elapsed = elapsed
    if _results and elapsed >= SUITE_BUDGET_S:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    elapsed = getattr(config, "_idcorr_elapsed", time.perf_counter() - _started)
    terminalreporter.section("acceptance criteria")
    for label in sorted(_results, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{_results[label]}  {label}")
    verdict = "PASS" if elapsed < SUITE_BUDGET_S else "FAIL"
    terminalreporter.write_line(f"{verdict}  AC10 full suite runtime {elapsed:.1f} s (< {SUITE_BUDGET_S:.0f} s)")
