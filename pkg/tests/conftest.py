import pytest

from deltalin.ring import make_context


@pytest.fixture(scope="session")
def c5():
    """Z/5^10 (m = 1)."""
    return make_context(5, 1, 10)


@pytest.fixture(scope="session")
def c5x2():
    """W(F_25)/5^8 with the modulus x^2 + 4x + 2."""
    return make_context(5, 2, 8, residue_poly=[2, 4, 1])


@pytest.fixture(scope="session")
def c7():
    return make_context(7, 1, 12)


@pytest.fixture(scope="session")
def c13x2():
    """W(F_169)/13^6, default modulus."""
    return make_context(13, 2, 6)
