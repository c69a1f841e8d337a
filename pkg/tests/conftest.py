import re

import pytest

from acctmodel import load, scenario_path
from acctmodel.dsl import parse_scenario, resolve

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)$")
_acceptance: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num, title = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or report.outcome != "passed":
        detail = ""
        if report.failed:
            detail = str(report.longrepr.reprcrash.message).splitlines()[0] if hasattr(report.longrepr, "reprcrash") \
                else str(report.longrepr).splitlines()[-1]
        status = "PASS" if report.passed else "FAIL"
        if report.skipped:
            status = "SKIP"
        _acceptance[num] = (status, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_acceptance):
        status, title, detail = _acceptance[num]
        line = f"{status} criterion {num}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))


@pytest.fixture(scope="session")
def scenario():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load(scenario_path(f"{name}.acct"))
        return cache[name]

    return get


@pytest.fixture
def from_text():
    return lambda text: resolve(parse_scenario(text))
