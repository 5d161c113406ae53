import pytest

_criteria: list[tuple[str, str, float | None]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        elapsed = dict(item.user_properties).get("elapsed")
        label = marker.args[0]
        callspec = getattr(item, "callspec", None)
        if callspec is not None:
            label += f" [{callspec.id}]"
        _criteria.append((label, "PASS" if report.passed else "FAIL", elapsed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, elapsed in _criteria:
        t = f"  ({elapsed:.2f} s)" if elapsed is not None else ""
        terminalreporter.write_line(f"{status}  {label}{t}")
