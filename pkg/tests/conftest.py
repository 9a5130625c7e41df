"""Shared pytest setup: acceptance-criterion bookkeeping.

Tests in ``test_acceptance.py`` carry ``@pytest.mark.criterion(n, title)``.
A criterion passes when every test tagged with it passed; the terminal
summary prints one line per criterion.
"""

from __future__ import annotations

_results: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by this test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n, title = m.args
            _results.setdefault(n, {"title": title, "outcomes": {}})
            _results[n]["outcomes"][item.nodeid] = None


def pytest_runtest_logreport(report):
    for entry in _results.values():
        if report.nodeid in entry["outcomes"]:
            if report.when == "call" or report.outcome != "passed":
                prev = entry["outcomes"][report.nodeid]
                if prev != "failed":
                    entry["outcomes"][report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        entry = _results[n]
        outcomes = list(entry["outcomes"].values())
        if any(o is None for o in outcomes):
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        tr.write_line(f"criterion {n:2d}: {status:7s} {entry['title']}")
