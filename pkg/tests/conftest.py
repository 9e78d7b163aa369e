import numpy as np
import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        number, title = marker.args
        prev = _criteria.get(number, (title, "PASS", 0.0))
        status = "FAIL" if report.failed or prev[1] == "FAIL" else "PASS"
        _criteria[number] = (title, status, prev[2] + report.duration)
    return report


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, seconds = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title} ({seconds:.1f} s)")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
