import test_acceptance


def pytest_terminal_summary(terminalreporter):
    lines = test_acceptance.RESULTS
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for ok, label, detail in lines:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label:<62} {detail}")
