import numpy as np
import pytest

from tomojoint.grids import Axis, GridError, GridFn, gridfn_from_func
from tomojoint.opalg import (
    AXIS_THETA,
    Deriv,
    FuncFactor,
    Product,
    Representation,
    Scalar,
    Sum,
    apply,
    conjugate_by_prior,
    ladder_operators,
    momentum_operator,
    polynomial_of_operator,
    position_operator,
)


def _test_functions(axes, count, seed=7):
    rng = np.random.default_rng(seed)
    Xg, mu, nu = np.meshgrid(*(a.points for a in axes), indexing="ij")
    for _ in range(count):
        out = np.zeros(Xg.shape)
        for _ in range(3):
            amp = rng.uniform(0.5, 1.5)
            cx, wx = rng.uniform(-0.6, 0.6), rng.uniform(1.1, 1.5)
            cm, wm = rng.uniform(-0.3, 0.3), rng.uniform(6.0, 8.0)
            cn, wn = rng.uniform(-0.3, 0.3), rng.uniform(6.0, 8.0)
            out = out + amp * np.exp(
                -(((Xg - cx) / wx) ** 2)
                - ((mu - cm) / wm) ** 2
                - ((nu - cn) / wn) ** 2
            )
        yield GridFn(axes, out)


def _interior(values):
    crop = values
    for ax in range(values.ndim):
        n = values.shape[ax]
        skip = max(1, int(round(0.1 * n)))
        crop = np.moveaxis(np.moveaxis(crop, ax, 0)[skip : n - skip], 0, ax)
    return crop


def test_representation_tags(params, p1):
    with pytest.raises(GridError):
        Representation("cartesian", params)
    rep = Representation("symplectic-joint", params, p1)
    assert rep.is_joint and rep.is_symplectic


def test_canonical_commutator(params, p1, default_axes):
    # [q, p] = i hbar as applied operators in the joint representation.
    rep = Representation("symplectic-joint", params, p1)
    q, p = position_operator(rep), momentum_operator(rep)
    f = next(iter(_test_functions(default_axes, 1)))
    comm = apply(q, apply(p, f)).values - apply(p, apply(q, f)).values
    dev = _interior(comm - 1j * params.hbar * f.values)
    assert np.max(np.abs(dev)) < 1e-6


def test_ladder_commutator(params, p1, default_axes):
    rep = Representation("symplectic-joint", params, p1)
    low, raise_ = ladder_operators(rep)
    for f in _test_functions(default_axes, 5):
        comm = apply(low, apply(raise_, f)).values - apply(raise_, apply(low, f)).values
        assert np.max(np.abs(_interior(comm - f.values))) < 1e-6


def test_ladder_optical_rejected(params, p2):
    with pytest.raises(GridError):
        ladder_operators(Representation("optical-joint", params, p2))


def test_conjugation_matches_joint_builders(params, p1, default_axes):
    # P [op] P^-1 of the tomographic rule equals the joint-representation
    # builder, applied to test functions.
    tomo = Representation("symplectic-tomogram", params)
    joint = Representation("symplectic-joint", params, p1)
    f = next(iter(_test_functions(default_axes, 1, seed=3)))
    for build in (position_operator, momentum_operator):
        lhs = apply(conjugate_by_prior(build(tomo), p1), f).values
        rhs = apply(build(joint), f).values
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_second_theta_conjugation_expansion(params, p2, theta_axis):
    # P d^2 P^-1 = d^2 - 2(P'/P) d + 2(P'/P)^2 - P''/P as expression trees.
    X = Axis(-8.0, 8.0, 161, "X")
    rng = np.random.default_rng(5)
    Xg, tg = np.meshgrid(X.points, theta_axis.points, indexing="ij")
    f = GridFn((X, theta_axis), np.exp(-(Xg**2) - ((tg - 1.3) / 0.8) ** 2))

    conj = conjugate_by_prior(Deriv(AXIS_THETA, 2), p2)
    L = lambda th: p2.deriv_ratio(th, 1)
    manual = Sum((
        Deriv(AXIS_THETA, 2),
        Product((Scalar(-2.0), FuncFactor(AXIS_THETA, L, "P'/P"), Deriv(AXIS_THETA))),
        FuncFactor(
            AXIS_THETA,
            lambda th: 2 * p2.deriv_ratio(th, 1) ** 2 - p2.deriv_ratio(th, 2),
            "2(P'/P)^2 - P''/P",
        ),
    ))
    dev = np.abs(apply(conj, f).values - apply(manual, f).values)
    assert np.max(dev) < 1e-8


def test_polynomial_of_operator_degree_cap(params):
    rep = Representation("symplectic-tomogram", params)
    q = position_operator(rep)
    with pytest.raises(GridError):
        polynomial_of_operator(q, (0.0,) * 8)


def test_polynomial_of_operator_linearity(params, p1, default_axes):
    rep = Representation("symplectic-joint", params, p1)
    q = position_operator(rep)
    f = next(iter(_test_functions(default_axes, 1, seed=9)))
    combo = apply(polynomial_of_operator(q, (0.5, 2.0)), f).values
    direct = 0.5 * f.values + 2.0 * apply(q, f).values
    assert np.max(np.abs(combo - direct)) < 1e-12


def test_apply_scalar_and_sum(default_axes):
    f = next(iter(_test_functions(default_axes, 1, seed=1)))
    doubled = apply(Sum((Scalar(1.5), Scalar(0.5))), f).values
    assert np.allclose(doubled, 2.0 * f.values)
