import re

import pytest

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _ACCEPTANCE.append((marker.args[0], item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")

    def key(number):
        num, rest = re.match(r"(\d+)(.*)", number).groups()
        return int(num), rest

    grouped = {}
    for number, name, outcome in _ACCEPTANCE:
        grouped.setdefault(str(number), []).append((name, outcome))
    for number in sorted(grouped, key=key):
        results = grouped[number]
        failed = sorted({name for name, outcome in results if outcome != "passed"})
        status = "FAIL" if failed else "PASS"
        names = failed or sorted({name.split("[")[0] for name, _ in results})
        terminalreporter.write_line(f"criterion {number:>3}: {status}  {', '.join(names)}")
