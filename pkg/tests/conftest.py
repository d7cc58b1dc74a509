from collections import defaultdict

import pytest

_criteria = {}
_outcomes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criteria[item.nodeid] = mark.args


@pytest.hookimpl(trylast=True)
def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    if report.when == "call" or report.failed:
        _outcomes[_criteria[report.nodeid]].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), results in sorted(_outcomes.items()):
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
