import numpy as np
import pytest
import scipy.linalg

from slnfib.complexes import torus_complex
from slnfib.foliation import ga_suspension, product_foliation
from slnfib.groups import GAElement
from slnfib.linalg import FMatrix


@pytest.fixture(scope="session")
def t2_8():
    return torus_complex(2, 8)


@pytest.fixture(scope="session")
def product_spec():
    """SL(2) foliation on T^2 from the GA suspension with holonomy (2, 0)."""
    return product_foliation(ga_suspension(8, GAElement(2.0, 0.0)))


def random_sl(n: int, rng, scale: float = 0.4) -> FMatrix:
    """Well-conditioned random SL(n) sample via exp of a traceless matrix."""
    x = rng.normal(size=(n, n)) * scale
    x -= np.trace(x) / n * np.eye(n)
    return FMatrix(scipy.linalg.expm(x))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
