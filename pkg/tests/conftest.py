import numpy as np
import pytest

from g2ell.curves import curve_v_from_alpha_beta
from g2ell.numerics import Tolerance
from g2ell.reduction import make_context


@pytest.fixture(scope="session")
def curve23():
    return curve_v_from_alpha_beta(2.0, 3.0)


@pytest.fixture(scope="session")
def ctx23(curve23):
    return make_context(curve23)


@pytest.fixture(scope="session")
def curve_complex():
    return curve_v_from_alpha_beta(1.5 + 0.5j, 0.5 - 0.25j)


@pytest.fixture(scope="session")
def ctx_complex(curve_complex):
    return make_context(curve_complex)


@pytest.fixture()
def rng():
    return np.random.default_rng(42)
