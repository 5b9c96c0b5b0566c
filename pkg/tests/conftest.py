import sys
from collections import defaultdict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results: dict[int, list[tuple[str, bool, str]]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        detail = dict(item.user_properties).get("detail", "")
        if not detail and report.failed:
            detail = report.longreprtext.strip().splitlines()[-1] if report.longreprtext else "error"
        _results[mark.args[0]].append((item.name, report.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        checks = _results[n]
        ok = all(passed for _, passed, _ in checks)
        tr.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n} ({sum(p for _, p, _ in checks)}/{len(checks)} checks)")
        for name, passed, detail in checks:
            tr.write_line(f"    {'pass' if passed else 'FAIL'} {name}: {detail}")
