import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Emit one visible [PASS]/[FAIL] line per acceptance criterion."""
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    tag = getattr(getattr(item, "function", None), "_criterion", None)
    if tag is None:
        return
    num, text = tag
    status = "PASS" if report.passed else "FAIL"
    line = f"[{status}] criterion {num:>2}: {text} ({report.duration:.2f}s)"
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.ensure_newline()
        reporter.write_line(line, bold=True, red=not report.passed, green=report.passed)
    else:
        print(line)
