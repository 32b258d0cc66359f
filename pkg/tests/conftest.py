"""Shared pytest plumbing: one PASS/FAIL summary line per acceptance
criterion at the end of the run."""

import re

_CRITERION = re.compile(r"test_criterion_(\d+)_")

_LABELS = {
    1: "identity suite",
    2: "general coefficient patterns",
    3: "quadratic-well asymptotics vs 2-D numerics",
    4: "cubic-well spectrum vs 2-D numerics",
    5: "1-D osculation",
    6: "landscape and critical radius",
    7: "separability",
}

_results: dict[int, bool] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = _CRITERION.search(report.nodeid)
    if match:
        number = int(match.group(1))
        _results[number] = _results.get(number, True) and report.passed


def pytest_sessionfinish(session, exitstatus):
    if not _results:
        return
    print("\n" + "=" * 64)
    print("acceptance summary")
    for number in sorted(_results):
        verdict = "PASS" if _results[number] else "FAIL"
        print(f"  criterion {number} [{_LABELS.get(number, '?')}]: {verdict}")
    print("=" * 64)
