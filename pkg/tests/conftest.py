from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_results: dict[str, tuple[str, str, float]] = {}


def pytest_runtest_logreport(report):
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if not marker:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _results[marker] = (outcome, report.nodeid, report.duration)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("acceptance")
    if m is not None:
        item.user_properties.append(("acceptance", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results, key=lambda k: int(k.lstrip("AC"))):
        outcome, nodeid, secs = _results[key]
        terminalreporter.write_line(f"{key:<5} {outcome}  {secs:7.2f}s  {nodeid}")
