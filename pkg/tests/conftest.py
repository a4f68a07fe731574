import pytest

from darbouxjac.core import family_coeffs


@pytest.fixture(scope="session")
def cheb1():
    return family_coeffs("chebyshev1")


@pytest.fixture(scope="session")
def cheb2():
    return family_coeffs("chebyshev2")


@pytest.fixture(scope="session")
def cheb3():
    return family_coeffs("chebyshev3")


@pytest.fixture(scope="session")
def cheb4():
    return family_coeffs("chebyshev4")


@pytest.fixture(scope="session")
def presets(cheb1, cheb2, cheb3, cheb4):
    return {
        "chebyshev1": cheb1,
        "chebyshev2": cheb2,
        "chebyshev3": cheb3,
        "chebyshev4": cheb4,
    }
