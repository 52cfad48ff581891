"""Prints the acceptance verdict lines recorded by tests/test_acceptance.py."""


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            lines += [v for name, v in getattr(rep, "user_properties", ()) if name == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
