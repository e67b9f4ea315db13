import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (report.when == "call" or report.failed):
        return
    number, text = marker.args
    entry = _criteria.setdefault(number, {"text": text, "failed": [], "known": []})
    if hasattr(report, "wasxfail"):
        entry["known"].append(f"{item.name}: {report.wasxfail}")
    elif report.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "FAIL" if entry["failed"] or entry["known"] else "PASS"
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['text']}")
        for name in entry["failed"]:
            terminalreporter.write_line(f"    failed: {name}")
        for note in entry["known"]:
            terminalreporter.write_line(f"    known failure: {note}")
