import re

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")
_results = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2).replace("_", " "))
    if report.when == "call" or report.outcome != "passed":
        failed = report.outcome != "passed" or _results.get(key) == "FAIL"
        _results[key] = "FAIL" if failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), verdict in sorted(_results.items()):
        terminalreporter.write_line(f"criterion {num}: {verdict}  {title}")
