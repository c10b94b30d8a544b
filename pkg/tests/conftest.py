"""Shared pytest hooks.

After a run that touched test_acceptance.py, print one PASS/FAIL line
per release-gate check so the gate can be read at a glance.
"""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    verdicts = {}
    for outcome, label in (("passed", "PASS"), ("failed", "FAIL"),
                           ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if outcome == "passed" and getattr(report, "when", "call") != "call":
                continue
            name = nodeid.split("::")[-1]
            if verdicts.get(name) != "FAIL":
                verdicts[name] = label
    if verdicts:
        terminalreporter.write_sep("=", "release gate")
        for name in sorted(verdicts):
            terminalreporter.write_line(f"{verdicts[name]}  {name}")
