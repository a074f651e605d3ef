from __future__ import annotations

import pytest

from pi_otp import digit_source
from pi_otp.digit_source import DigitSourceSpec, SourceKind, open_source

from oracles import mpmath_pi_hex

POOL_DIGITS = digit_source.DEFAULT_POOL_DIGITS


@pytest.fixture(scope="session")
def pi_digits() -> str:
    """The default-size pool of pi digits, cross-checked against mpmath."""
    digits = digit_source.pi_hex_prefix(POOL_DIGITS, engine="mpfr")
    assert digits == mpmath_pi_hex(POOL_DIGITS)
    return digits


@pytest.fixture(scope="session")
def pi_file(pi_digits, tmp_path_factory):
    path = tmp_path_factory.mktemp("pool") / "pi_hex.txt"
    digit_source.write_digit_file(path, pi_digits)
    return path


@pytest.fixture(scope="session")
def file_source(pi_file):
    return open_source(DigitSourceSpec(SourceKind.PI_FILE, pi_file))


@pytest.fixture(scope="session")
def computed_source():
    return open_source(DigitSourceSpec(SourceKind.COMPUTED))


# One summary line per acceptance criterion.
_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        _acceptance.setdefault(report.nodeid, report.outcome)
        if report.outcome != "passed":
            _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("::")[-1]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
