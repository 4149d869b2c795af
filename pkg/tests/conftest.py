"""Suite-wide hooks: one pass/fail line per acceptance check at the end."""

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_results[name] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and report.failed:
        _acceptance_results[name] = "ERROR"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance checks:")
    for name, status in sorted(_acceptance_results.items()):
        terminalreporter.write_line(f"  {name}: {status}")
