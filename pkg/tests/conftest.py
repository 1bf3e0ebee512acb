"""Collects acceptance-criterion outcomes and prints one verdict line per criterion."""
import pytest

_VERDICTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.failed):
        _VERDICTS[number] = (title, report.passed, report.longrepr)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        title, passed, longrepr = _VERDICTS[number]
        tr.write_line(f"[{'PASS' if passed else 'FAIL'}] AC{number:>2}: {title}")
        if not passed and longrepr is not None:
            reason = getattr(longrepr, "reprcrash", None)
            if reason is not None:
                tr.write_line(f"         {reason.message.splitlines()[0]}")
