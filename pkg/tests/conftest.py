from fractions import Fraction

import pytest

from upsilab import PrecisionCtx, make_surd


@pytest.fixture(scope="session")
def sqrt2m1():
    """sqrt(2) - 1: the all-(2,+) fixed point."""
    return make_surd(-1, 1, 1, 2)


@pytest.fixture(scope="session")
def golden():
    """(sqrt(5) - 1)/2: modified symbols all (3,-), classical entries all 1."""
    return make_surd(-1, 1, 2, 5)


@pytest.fixture(scope="session")
def golden_residue():
    """(3 - sqrt(5))/2: the residue orbit of the golden mean."""
    return make_surd(3, -1, 2, 5)


@pytest.fixture(scope="session")
def ctx128():
    return PrecisionCtx(128)


@pytest.fixture(scope="session")
def ctx192():
    return PrecisionCtx(192)
