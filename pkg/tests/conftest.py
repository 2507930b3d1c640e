import pytest

from rhmap import make_hyperelliptic, omega_basis, pair_loop
from rhmap.checks import Genus2Fixture

# acceptance criterion id -> (passed, detail), filled in by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (len(k), k)):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key:<4} {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def sextic():
    return make_hyperelliptic([-1, 0, 0, 0, 0, 0, 1])


@pytest.fixture(scope="session")
def octic():
    return make_hyperelliptic([-1, 0, 0, 0, 0, 0, 0, 0, 1])


@pytest.fixture(scope="session")
def omega(sextic):
    return omega_basis(sextic)


@pytest.fixture(scope="session")
def loop01(sextic):
    return pair_loop(sextic, 0, 1, 3.0, label="a")


@pytest.fixture(scope="session")
def loop12(sextic):
    return pair_loop(sextic, 1, 2, 3.0, label="b")


@pytest.fixture(scope="session")
def fixture():
    return Genus2Fixture(seed=1)
