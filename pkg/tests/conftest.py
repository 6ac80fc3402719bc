import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or rep.failed or rep.skipped:
        prev = _RESULTS.get(number, (title, "PASS", []))
        status = prev[1]
        if rep.failed:
            status = "FAIL"
        elif rep.skipped and status == "PASS":
            status = "SKIP"
        notes = prev[2] + [v for k, v in item.user_properties if k == "note"]
        _RESULTS[number] = (title, status, notes)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, status, notes = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
        for note in dict.fromkeys(notes):
            terminalreporter.write_line(f"    {note}")
