import pytest

_CRITERIA = {}


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False, help="run the long-run checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "long: needs --long")
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _CRITERIA.setdefault(mark.args[0], []).append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        outcomes = [o for _, o in results]
        status = "FAIL" if "failed" in outcomes else ("PASS" if "passed" in outcomes else "SKIP")
        skipped = [name for name, o in results if o == "skipped"]
        note = f" ({len(skipped)} long check(s) skipped)" if skipped and status != "SKIP" else ""
        terminalreporter.write_line(f"criterion {n:2d}: {status}{note}")
