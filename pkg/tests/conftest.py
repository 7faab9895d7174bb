import pytest

ACCEPTANCE: dict[str, tuple[bool, list[str]]] = {}


@pytest.fixture
def record_criterion():
    """Record one acceptance outcome; repeated calls for the same criterion AND together."""

    def record(name: str, passed: bool, note: str = "") -> None:
        prev_ok, notes = ACCEPTANCE.get(name, (True, []))
        ACCEPTANCE[name] = (prev_ok and passed, notes + ([note] if note else []))
        assert passed, f"{name}: {note}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda n: int(n.split(".")[0])):
        passed, notes = ACCEPTANCE[name]
        line = f"[{'PASS' if passed else 'FAIL'}] {name}"
        if notes:
            line += "  (" + "; ".join(notes) + ")"
        terminalreporter.write_line(line)
