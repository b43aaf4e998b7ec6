from __future__ import annotations

import random
from fractions import Fraction

import pytest

from lcfn.appell import numeric_system, system
from lcfn.verify import random_rational_system


@pytest.fixture(scope="session")
def beta():
    return system("beta", 32)


@pytest.fixture(scope="session")
def beta_half():
    return system("beta_a", 32, a=Fraction(1, 2))


@pytest.fixture(scope="session")
def exact_family():
    """Builtins plus fifty seeded random rational systems."""
    rng = random.Random(20240611)
    return [
        system("beta", 21),
        system("beta_a", 21, a=Fraction(1, 2)),
        system("beta_a", 21, a=Fraction(1, 3)),
    ] + [random_rational_system(rng, name=f"random#{i}") for i in range(50)]


@pytest.fixture(scope="session")
def nbeta():
    return numeric_system("beta")


@pytest.fixture(scope="session")
def nhalf():
    return numeric_system("beta_a", a=Fraction(1, 2))


@pytest.fixture(scope="session")
def nthird():
    return numeric_system("beta_a", a=Fraction(1, 3))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
