import pytest

from orlimark.conjugate import log_power, power_log
from orlimark.norms import NormContext


@pytest.fixture(scope="session")
def ctx():
    # One shared context so ConjugateCache/OrliczN construction is paid once.
    return NormContext()


@pytest.fixture(scope="session")
def phi1():
    return power_log(1.0)


@pytest.fixture(scope="session")
def phi2():
    return power_log(2.0)


@pytest.fixture(scope="session")
def phi_nu1():
    return log_power(1.0)
