import pytest

from ospnlie import nlie
from ospnlie.hte import run_hte

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def hte13():
    return run_hte(13)


@pytest.fixture(scope="session")
def sol_t2():
    return nlie.solve_fixed_point(nlie.NlieParams(1, -1.0, 2.0), raise_on_failure=True)


@pytest.fixture(scope="session")
def sol_j0():
    return nlie.solve_fixed_point(nlie.NlieParams(1, 0.0, 2.0), raise_on_failure=True)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
