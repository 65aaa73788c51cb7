import math

import numpy as np
import pytest

from tomojoint.defaults import default_p_axis, default_q_axis
from tomojoint.grids import Axis, GridError, integrate
from tomojoint.states import (
    Coherent,
    Fock,
    SqueezedGaussian,
    density_matrix,
    wigner_analytic,
    wigner_from_density,
)
from tomojoint.tomography import (
    optical_tomogram,
    symplectic_tomogram,
    tomogram_analytic,
    wigner_from_symplectic,
)


@pytest.fixture(scope="module")
def vacuum_wigner(params):
    rho = density_matrix(Fock(0), params, default_q_axis())
    return wigner_from_density(rho, params, default_p_axis())


def test_analytic_vacuum_tomogram_value(params, default_axes):
    # mu = 1 must be a grid node for a pointwise check (the default 97-point
    # mu axis does not contain it), so use a 181-point axis with spacing 0.05.
    X, _, NU = default_axes
    MU = Axis(-4.5, 4.5, 181, "mu")
    M = tomogram_analytic(Fock(0), "symplectic", X, (MU, NU), params)
    ix = int(np.argmin(np.abs(X.points)))
    imu = int(np.argmin(np.abs(MU.points - 1.0)))
    inu = int(np.argmin(np.abs(NU.points)))
    assert MU.points[imu] == pytest.approx(1.0)
    # M(0, 1, 0) = 1/sqrt(pi) for the ground state with defaults.
    assert M.grid.values[ix, imu, inu] == pytest.approx(1 / math.sqrt(math.pi), abs=1e-3)


def test_numeric_matches_analytic_symplectic(params, vacuum_wigner, default_axes):
    X, MU, NU = default_axes
    numeric = symplectic_tomogram(vacuum_wigner, X, MU, NU, params)
    exact = tomogram_analytic(Fock(0), "symplectic", X, (MU, NU), params)
    assert np.max(np.abs(numeric.grid.values - exact.grid.values)) < 1e-3


def test_numeric_matches_analytic_optical(params, vacuum_wigner, default_axes, theta_axis):
    X, _, _ = default_axes
    numeric = optical_tomogram(vacuum_wigner, X, theta_axis, params)
    exact = tomogram_analytic(Fock(0), "optical", X, (theta_axis,), params)
    assert np.max(np.abs(numeric.grid.values - exact.grid.values)) < 1e-3


def test_slice_normalization(params, vacuum_wigner, default_axes):
    X, MU, NU = default_axes
    M = symplectic_tomogram(vacuum_wigner, X, MU, NU, params)
    masses = integrate(M.grid, (0,))
    assert np.max(np.abs(masses.values - 1.0)) < 1e-3


def test_coherent_slice_peak(params, default_axes):
    # The (X | mu=1, nu=0) slice of Coherent(1/sqrt 2) peaks at X = <q> = 1.
    X, MU, NU = default_axes
    spec = Coherent(complex(1 / np.sqrt(2), 0.0))
    M = tomogram_analytic(spec, "symplectic", X, (MU, NU), params)
    imu = int(np.argmin(np.abs(MU.points - 1.0)))
    inu = int(np.argmin(np.abs(NU.points)))
    sl = M.grid.values[:, imu, inu]
    peak = X.points[int(np.argmax(sl))]
    assert abs(peak - 1.0) <= X.spacing + 1e-12


def test_optical_angle_domain(params):
    W = wigner_analytic(Fock(0), params, default_q_axis(), default_p_axis())
    with pytest.raises(GridError):
        optical_tomogram(W, default_q_axis(), Axis(-0.5, np.pi, 61, "theta"), params)


def test_tomogram_analytic_rejects_non_gaussian(params, default_axes):
    X, MU, NU = default_axes
    with pytest.raises(ValueError):
        tomogram_analytic(Fock(1), "symplectic", X, (MU, NU), params)


def test_wigner_reconstruction_round_trip(params, default_axes):
    X, MU, NU = default_axes
    q_axis, p_axis = default_q_axis(), default_p_axis()
    for spec in (Fock(0), Coherent(complex(1 / np.sqrt(2), 0.0))):
        M = tomogram_analytic(spec, "symplectic", X, (MU, NU), params)
        W = wigner_from_symplectic(M, q_axis, p_axis)
        target = wigner_analytic(spec, params, q_axis, p_axis)
        half_q = np.abs(q_axis.points) <= 4.0
        half_p = np.abs(p_axis.points) <= 4.0
        dev = np.abs(W.values - target.values)[np.ix_(half_q, half_p)]
        assert np.max(dev) < 5e-3, spec


def test_reconstructed_peak_location(params, default_axes):
    X, MU, NU = default_axes
    q_axis, p_axis = default_q_axis(), default_p_axis()
    spec = Coherent(complex(1 / np.sqrt(2), 0.0))
    M = tomogram_analytic(spec, "symplectic", X, (MU, NU), params)
    W = wigner_from_symplectic(M, q_axis, p_axis)
    iq, ip = np.unravel_index(np.argmax(W.values), W.values.shape)
    assert abs(q_axis.points[iq] - 1.0) <= q_axis.spacing + 1e-12
    assert abs(p_axis.points[ip]) <= p_axis.spacing + 1e-12
