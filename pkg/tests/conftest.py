import pytest

from zfr.trigpoly import TrigPoly, mt16


@pytest.fixture(scope="session")
def poly16():
    return mt16()


@pytest.fixture
def square_poly():
    # 3 + 4cos(phi) + cos(2phi) = 2(1 + cos(phi))^2
    return TrigPoly((3.0, 4.0, 1.0))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance checks")
    for r in RESULTS:
        tr.write_line(r.line())
    summary = {}
    for r in RESULTS:
        if r.criterion is not None:
            summary[r.criterion] = summary.get(r.criterion, True) and r.passed
    tr.section("acceptance criteria")
    for crit in sorted(summary):
        tr.write_line(f"criterion {crit:>2}: {'PASS' if summary[crit] else 'FAIL'}")
