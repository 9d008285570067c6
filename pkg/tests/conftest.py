"""Shared test plumbing: a per-criterion PASS/FAIL summary.

Acceptance tests are named test_criterion_NN_*; after the run a summary
section prints one line per criterion so the overall contract status is
readable at a glance even inside a long pytest log.
"""

import re

CRITERION_TITLES = {
    1: "identical sets score exactly 1 on all four metrics",
    2: "mean density matches its closed-form expectation for two distributions",
    3: "mean coverage matches the closed form; product agrees with rational oracle",
    4: "reference point values at N=M=10000, D=64 (k=3 and k=5)",
    5: "one outlier inflates precision/recall but not density/coverage",
    6: "mode dropping: coverage tracks diversity loss, recall lags until collapse",
    7: "CLI neighbor-count selection point values",
    8: "selection and membership match independent slow oracles exactly",
    9: "file-format round trips and CLI error hygiene",
    10: "in-process bindings match CLI output digit for digit",
}

_PATTERN = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results: dict[int, bool] = {}
    for status, reports in terminalreporter.stats.items():
        if status not in ("passed", "failed", "error"):
            continue
        for report in reports:
            match = _PATTERN.search(getattr(report, "nodeid", ""))
            if not match:
                continue
            num = int(match.group(1))
            ok = status == "passed"
            results[num] = results.get(num, True) and ok
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        verdict = "PASS" if results[num] else "FAIL"
        terminalreporter.write_line(
            f"criterion {num:2d}: {verdict} - {CRITERION_TITLES.get(num, '')}")
