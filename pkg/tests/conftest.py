import pytest

CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    callspec = getattr(item, "callspec", None)
    key = (number, callspec.id if callspec else "")
    CRITERIA[key] = (title, report.passed, getattr(item, "criterion_detail", ""))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, variant in sorted(CRITERIA):
        title, passed, detail = CRITERIA[number, variant]
        label = f"AC{number}" + (f"[{variant}]" if variant else "")
        line = f"[{'PASS' if passed else 'FAIL'}] {label:<10} {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
