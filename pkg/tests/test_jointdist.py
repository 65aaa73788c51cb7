import math

import numpy as np
import pytest

from tomojoint.grids import GridError, integrate
from tomojoint.jointdist import (
    GaussianPrior,
    GaussianSumPrior,
    make_joint,
    parse_prior,
    prior_eval,
    prior_moment_integral,
    recover_conditional,
)
from tomojoint.states import Fock
from tomojoint.tomography import tomogram_analytic


def test_prior_value_at_origin(p1):
    assert p1.eval(0.0, 0.0) == pytest.approx(1 / math.pi)


def test_prior_normalized():
    prior = GaussianPrior(0.4, -0.3, 1.3, 0.7)
    mu = np.linspace(-10, 10, 801)
    nu = np.linspace(-10, 10, 801)
    vals = prior.eval(mu[:, None], nu[None, :])
    mass = np.trapezoid(np.trapezoid(vals, nu, axis=1), mu)
    assert mass == pytest.approx(1.0, abs=1e-10)


def test_optical_prior_normalized(p2):
    theta = np.linspace(0, np.pi, 20001)
    assert np.trapezoid(p2.eval(theta), theta) == pytest.approx(1.0, abs=1e-8)


def test_joint_value_example(vacuum_joint):
    # M-tilde(0, 1, 0) = (1/sqrt(pi)) * (e^-1 / pi) for Fock(0) x default P1.
    X, MU, NU = vacuum_joint.grid.axes
    ix = int(np.argmin(np.abs(X.points)))
    imu = int(np.argmin(np.abs(MU.points - 1.0)))
    inu = int(np.argmin(np.abs(NU.points)))
    want = (1 / math.sqrt(math.pi)) * math.exp(-1.0) / math.pi
    assert want == pytest.approx(0.06607, abs=5e-5)
    got = vacuum_joint.grid.values[ix, imu, inu]
    # mu = 1.0 falls between grid nodes on the default axis; compare at the
    # nearest node against the analytic joint there.
    mu_node = MU.points[imu]
    node_want = (
        np.exp(-(0.0**2) / (mu_node**2 + 0.0**2))
        / np.sqrt(np.pi * (mu_node**2))
        * np.exp(-(mu_node**2)) / np.pi
    )
    assert got == pytest.approx(node_want, rel=1e-3)


def test_joint_mass_one(vacuum_joint, vacuum_optical_joint):
    assert integrate(vacuum_joint.grid, (0, 1, 2)) == pytest.approx(1.0, abs=1e-3)
    assert integrate(vacuum_optical_joint.grid, (0, 1)) == pytest.approx(1.0, abs=1e-3)


def test_make_joint_prior_mismatch(params, p1, p2, default_axes, theta_axis):
    X, MU, NU = default_axes
    M = tomogram_analytic(Fock(0), "symplectic", X, (MU, NU), params)
    with pytest.raises(GridError):
        make_joint(M, p2)
    w = tomogram_analytic(Fock(0), "optical", X, (theta_axis,), params)
    with pytest.raises(GridError):
        make_joint(w, p1)


def test_recover_conditional_inverts_make_joint(params, p1, vacuum_joint, default_axes):
    X, MU, NU = default_axes
    M = tomogram_analytic(Fock(0), "symplectic", X, (MU, NU), params)
    back = recover_conditional(vacuum_joint)
    assert np.max(np.abs(back.grid.values - M.grid.values)) < 1e-10


def test_prior_moment_identity():
    prior = GaussianPrior(0.3, -0.2, 1.2, 0.8)
    for k in range(4):
        for l in range(4):
            want = (-1.0) ** (k + l) * math.factorial(k) * math.factorial(l)
            assert prior_moment_integral(prior, k, l) == pytest.approx(want, abs=1e-6)


def test_prior_moment_mismatch_vanishes():
    prior = GaussianPrior(1.0, 0.5, 0.7, 1.3)
    assert abs(prior_moment_integral(prior, 2, 1, 1, 1)) < 1e-8
    assert abs(prior_moment_integral(prior, 1, 3, 1, 2)) < 1e-8


def test_parse_prior():
    p = parse_prior("p1:mu0=0.1,nu0=-0.2,xi=1.5,zeta=0.8")
    assert p == GaussianPrior(0.1, -0.2, 1.5, 0.8)
    q = parse_prior('p2:[{"q":0.6,"f":1.0,"phi":0.7},{"q":0.4,"f":2.0,"phi":0.9}]')
    assert isinstance(q, GaussianSumPrior)
    bare = parse_prior("p2:[{q:0.6,f:1.0,phi:0.7},{q:0.4,f:2.0,phi:0.9}]")
    assert bare == q


def test_parse_prior_errors():
    with pytest.raises(ValueError):
        parse_prior("p3:x=1")
    with pytest.raises(ValueError):
        parse_prior("p1:xi=notanumber")


def test_prior_validation():
    with pytest.raises(ValueError):
        GaussianPrior(0, 0, -1.0, 1.0)
    with pytest.raises(ValueError):
        GaussianSumPrior(((0.5, 1.0, 0.7),))  # weights must sum to one


def test_prior_eval_dispatch(p1, p2):
    assert prior_eval(p1, 0.0, 0.0) == pytest.approx(1 / math.pi)
    val = prior_eval(p2, np.array([np.pi / 3]))
    assert val[0] > 0
