import pytest

_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        _RESULTS.setdefault(marker, []).append(report.outcome)


@pytest.fixture(autouse=True)
def _record_criterion(request):
    m = request.node.get_closest_marker("acceptance")
    if m:
        request.node.user_properties.append(("criterion", m.args[0]))
    yield


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        outcomes = _RESULTS[number]
        status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status} ({len(outcomes)} checks)")
