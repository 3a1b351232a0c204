import sys


def pytest_terminal_summary(terminalreporter):
    results = {}
    for module in list(sys.modules.values()):
        results.update(getattr(module, "ACCEPTANCE_RESULTS", None) or {})
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
