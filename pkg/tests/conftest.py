import pytest

ACCEPTANCE_LINES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def criterion(request):
    """Entry for one acceptance criterion; tests may add a ``detail`` string."""
    number, title = request.node.get_closest_marker("criterion").args
    entry = ACCEPTANCE_LINES.setdefault(number, {"title": title, "ok": None, "detail": ""})
    return entry


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and report.when == "call":
        entry = ACCEPTANCE_LINES.setdefault(marker.args[0], {"title": marker.args[1], "ok": None, "detail": ""})
        entry["ok"] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        entry = ACCEPTANCE_LINES[number]
        status = "PASS" if entry["ok"] else "FAIL"
        detail = f"  [{entry['detail']}]" if entry["detail"] else ""
        terminalreporter.write_line(f"{status}  criterion {number}: {entry['title']}{detail}")
