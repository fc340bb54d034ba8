import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "100")),
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("repo")


# criterion number -> {"title": str, "nodes": {nodeid: outcome}}
_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(config, items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _CRITERIA.setdefault(number, {"title": title, "nodes": {}})["nodes"][item.nodeid] = None


def pytest_runtest_logreport(report):
    for entry in _CRITERIA.values():
        nodes = entry["nodes"]
        if report.nodeid in nodes and nodes[report.nodeid] != "failed":
            if report.when == "call" or report.failed or report.skipped:
                nodes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        outcomes = list(entry["nodes"].values())
        if all(o == "passed" for o in outcomes):
            verdict = "PASS"
        elif "failed" in outcomes:
            verdict = "FAIL"
        else:
            verdict = "NOT RUN"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {entry['title']}")
