import os

import pytest

SLOW = os.environ.get("EIS_SLOW") == "1"

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): numbered acceptance criterion")


def pytest_collection_modifyitems(config, items):
    if SLOW:
        return
    skip = pytest.mark.skip(reason="slow; set EIS_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "setup" and rep.skipped:
        _ACCEPTANCE[n] = (title, "SKIP")
    elif rep.when == "call":
        if rep.passed:
            _ACCEPTANCE[n] = (title, "PASS")
        elif rep.skipped:
            _ACCEPTANCE[n] = (title, "SKIP")
        else:
            _ACCEPTANCE[n] = (title, "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[n]
        terminalreporter.write_line(f"{status:4}  {n:2d}. {title}")
