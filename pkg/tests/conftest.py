import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion gate")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed
    skipped = report.skipped and report.when in ("setup", "call")
    if report.when == "call" or failed or skipped:
        prev = _RESULTS.get(number, (title, "PASS", 0.0))
        status = "FAIL" if failed or prev[1] == "FAIL" else ("SKIP" if skipped else "PASS")
        _RESULTS[number] = (title, status, prev[2] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, status, seconds = _RESULTS[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} ({seconds:.1f} s)")
