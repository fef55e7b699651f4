import pytest

from scw.generators import gen_blowup, gen_double_hex, gen_hex, gen_petal, gen_thick_square


@pytest.fixture(scope="session")
def hex3():
    return gen_hex(3)


@pytest.fixture(scope="session")
def hex2():
    return gen_hex(2)


@pytest.fixture(scope="session")
def blowup2():
    return gen_blowup(2)


@pytest.fixture(scope="session")
def square():
    return gen_thick_square()


@pytest.fixture(scope="session")
def petal3():
    return gen_petal(3)


@pytest.fixture(scope="session")
def doublehex():
    return gen_double_hex(3)


@pytest.fixture(scope="session")
def hex3_walls(hex3):
    from scw.walls import all_walls

    return all_walls(hex3.complex)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
