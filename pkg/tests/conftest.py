import math

import pytest

DPHI = math.radians(4.0)


@pytest.fixture
def dphi():
    return DPHI


_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record ``(criterion, ok, detail)`` clauses for the end-of-run summary."""

    def record(criterion, ok, detail):
        _ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        clauses = _ACCEPTANCE[name]
        status = "PASS" if all(ok for ok, _ in clauses) else "FAIL"
        details = "; ".join(d if ok else f"[failed] {d}" for ok, d in clauses)
        tr.write_line(f"{name} {status}: {details}")
