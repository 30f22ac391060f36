"""Collect acceptance outcomes and print one line per criterion at the end of the run."""

import pytest

_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion number and short title")


def _criterion(item):
    mark = item.get_closest_marker("criterion")
    return (mark.args[0], mark.args[1]) if mark else None


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    crit = _criterion(item)
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        # parametrized criteria pass only if every case passes
        passed, seconds = _OUTCOMES.get(crit, (True, 0.0))
        _OUTCOMES[crit] = (passed and report.passed, seconds + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for (k, title), (passed, seconds) in sorted(_OUTCOMES.items()):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {status}  {title} ({seconds:.2f} s)")
