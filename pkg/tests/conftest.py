import numpy as np
import pytest

from tomojoint.defaults import (
    DEFAULT_P1,
    DEFAULT_P2,
    DEFAULT_PARAMS,
    default_mu_axis,
    default_nu_axis,
    default_theta_axis,
    default_x_axis,
)
from tomojoint.jointdist import GaussianPrior, GaussianSumPrior, make_joint
from tomojoint.states import Coherent, Fock
from tomojoint.tomography import tomogram_analytic


@pytest.fixture(scope="session")
def params():
    return DEFAULT_PARAMS


@pytest.fixture(scope="session")
def p1():
    return GaussianPrior(**DEFAULT_P1)


@pytest.fixture(scope="session")
def p2():
    return GaussianSumPrior(tuple((c["q"], c["f"], c["phi"]) for c in DEFAULT_P2))


@pytest.fixture(scope="session")
def default_axes():
    return default_x_axis(), default_mu_axis(), default_nu_axis()


@pytest.fixture(scope="session")
def theta_axis():
    return default_theta_axis()


@pytest.fixture(scope="session")
def vacuum_joint(params, p1, default_axes):
    """Fock(0) symplectic joint from the analytic tomogram on default grids."""
    X, MU, NU = default_axes
    return make_joint(tomogram_analytic(Fock(0), "symplectic", X, (MU, NU), params), p1)


@pytest.fixture(scope="session")
def coherent_joint(params, p1, default_axes):
    X, MU, NU = default_axes
    spec = Coherent(complex(1 / np.sqrt(2), 0.0))
    return make_joint(tomogram_analytic(spec, "symplectic", X, (MU, NU), params), p1)


@pytest.fixture(scope="session")
def vacuum_optical_joint(params, p2, default_axes, theta_axis):
    X, _, _ = default_axes
    return make_joint(tomogram_analytic(Fock(0), "optical", X, (theta_axis,), params), p2)
