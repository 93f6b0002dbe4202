import pytest

from annulus_roots import Polynomial

_ACCEPTANCE = {}


def poly(*coeffs):
    """Polynomial from coefficients in ascending degree order."""
    return Polynomial.from_coefficients(coeffs)


@pytest.fixture
def criterion():
    """Record one acceptance outcome; printed in the terminal summary."""

    def record(number, ok, detail):
        _ACCEPTANCE[number] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
