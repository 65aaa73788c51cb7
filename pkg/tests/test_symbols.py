import math

import numpy as np
import pytest

from tomojoint.grids import Axis, GridError, integrate
from tomojoint.jointdist import GaussianPrior, make_joint
from tomojoint.states import (
    Coherent,
    Fock,
    SqueezedGaussian,
    state_moments,
    wigner_analytic,
    wigner_moment,
)
from tomojoint.symbols import (
    SingularSymbol,
    SingularTerm,
    alternative_regular_symbols_q2_p2,
    monomial_regular_symbol,
    pair,
    regular_symbol,
    singular_symbol,
)
from tomojoint.tomography import tomogram_analytic

WIDE_X = Axis(-16.0, 16.0, 321, "X")
WIDE_MU = Axis(-7.0, 7.0, 151, "mu")
WIDE_NU = Axis(-7.0, 7.0, 151, "nu")


def _oracle(spec, name, params):
    mom = state_moments(spec, params)
    if name == "one":
        return 1.0 + 0j
    if name == "qp":
        return mom["qp"] + 0.5j * params.hbar
    return complex(mom[name])


@pytest.mark.parametrize("name", ["one", "q", "p", "qp", "n"])
def test_singular_symbols_vacuum(name, params, p1, vacuum_joint):
    sname = {"n": "number"}.get(name, name)
    got = pair(singular_symbol(sname, p1, params=params), vacuum_joint)
    assert abs(got - _oracle(Fock(0), name, params)) < 2e-2


def test_singular_powers_coherent(params, p1, coherent_joint):
    spec = Coherent(complex(1 / np.sqrt(2), 0.0))
    q2 = pair(singular_symbol("qn", p1, n=2, params=params), coherent_joint)
    p2v = pair(singular_symbol("pn", p1, n=2, params=params), coherent_joint)
    mom = state_moments(spec, params)
    assert abs(q2 - mom["q2"]) < 2e-2
    assert abs(p2v - mom["p2"]) < 2e-2


def test_singular_qp_ordering(params, p1, vacuum_joint):
    got = pair(singular_symbol("qp", p1, params=params), vacuum_joint)
    assert got.imag == pytest.approx(0.5 * params.hbar, abs=2e-2)
    assert abs(got.real) < 2e-2


@pytest.mark.parametrize("name", ["q", "p", "q2", "p2", "qp", "n"])
def test_regular_symplectic_coherent(name, params, p1, coherent_joint):
    spec = Coherent(complex(1 / np.sqrt(2), 0.0))
    got = pair(regular_symbol(name, "symplectic", p1, params), coherent_joint)
    oracle = _oracle(spec, name, params)
    assert abs(got - oracle) < 2e-2


@pytest.mark.parametrize("name", ["q", "p", "q2", "p2", "qp", "n"])
def test_regular_optical_vacuum(name, params, p2, vacuum_optical_joint):
    got = pair(regular_symbol(name, "optical", p2, params), vacuum_optical_joint)
    oracle = _oracle(Fock(0), name, params)
    assert abs(got - oracle) < 2e-2


def test_identity_pairing_off_center_priors(params):
    # The corrected identity-symbol exponent must give <1> = 1 for priors
    # displaced off the origin.
    for prior in (GaussianPrior(0.5, -0.4, 1.1, 0.9), GaussianPrior(-0.8, 0.6, 0.8, 1.2)):
        M = tomogram_analytic(Fock(0), "symplectic", WIDE_X, (WIDE_MU, WIDE_NU), params)
        joint = make_joint(M, prior)
        got = pair(singular_symbol("one", prior, params=params), joint)
        assert abs(got - 1.0) < 1e-2


def test_monomial_symbols_wide_grid(params, p1):
    spec = SqueezedGaussian(0.5, -0.3, 2.0)
    M = tomogram_analytic(spec, "symplectic", WIDE_X, (WIDE_MU, WIDE_NU), params)
    joint = make_joint(M, p1)
    W = wigner_analytic(spec, params, WIDE_X, Axis(-16.0, 16.0, 321, "p"))
    for k, l in ((1, 0), (2, 0), (1, 1), (2, 2), (0, 4)):
        got = pair(monomial_regular_symbol(k, l, p1, params), joint)
        want = wigner_moment(W, k, l)
        tol = 3e-2 if k + l >= 4 else 2e-2
        assert abs(got - want) / max(abs(want), 1.0) < tol, (k, l)


def test_monomial_order_cap(params, p1):
    with pytest.raises(ValueError):
        monomial_regular_symbol(3, 2, p1, params)


def test_prior_invariance_wide_grid(params):
    # Pairings must not depend on the prior choice; wide grids keep the
    # quadratic-weighted tails inside the window for displaced priors.
    spec = Coherent(0.6 + 0.2j)
    M = tomogram_analytic(spec, "symplectic", WIDE_X, (WIDE_MU, WIDE_NU), params)
    mom = state_moments(spec, params)
    for prior in (GaussianPrior(0.0, 0.0, 1.0, 1.0), GaussianPrior(0.4, -0.3, 1.3, 0.9)):
        joint = make_joint(M, prior)
        got = pair(regular_symbol("q2", "symplectic", prior, params), joint)
        assert abs(got - mom["q2"]) < 2e-2, prior


def test_alternative_symbols_functional_agreement(params, p1, coherent_joint):
    alt_q2, alt_p2 = alternative_regular_symbols_q2_p2(p1, params)
    primary_q2 = regular_symbol("q2", "symplectic", p1, params)
    primary_p2 = regular_symbol("p2", "symplectic", p1, params)
    assert abs(pair(alt_q2, coherent_joint) - pair(primary_q2, coherent_joint)) < 2e-2
    assert abs(pair(alt_p2, coherent_joint) - pair(primary_p2, coherent_joint)) < 2e-2


def test_alternative_symbols_differ_pointwise(params, p1, vacuum_joint):
    alt_q2, _ = alternative_regular_symbols_q2_p2(p1, params)
    primary = regular_symbol("q2", "symplectic", p1, params)
    mesh = vacuum_joint.grid.meshgrid()
    assert np.max(np.abs(alt_q2.fn(*mesh) - primary.fn(*mesh))) > 0.1


def test_singular_support_outside_hull(params, vacuum_joint):
    # xi = 6 puts the q-symbol support at mu = 6, beyond the default axis.
    wide_prior = GaussianPrior(0.0, 0.0, 6.0, 1.0)
    symbol = singular_symbol("q", wide_prior, params=params)
    joint = vacuum_joint
    # pairing checks prior compatibility first; rebuild the joint with the
    # wide prior on the default (too narrow) grid is impossible through
    # make_joint (mass loss), so attach by hand for the hull check.
    from tomojoint.jointdist import JointDistribution

    fake = JointDistribution(
        "symplectic", joint.grid, wide_prior, joint.params
    )
    with pytest.raises(GridError, match="hull"):
        pair(symbol, fake)


def test_pair_rejects_mismatched_prior(params, p1, vacuum_joint):
    other = GaussianPrior(0.1, 0.0, 1.0, 1.0)
    with pytest.raises(GridError):
        pair(singular_symbol("one", other, params=params), vacuum_joint)


def test_pair_rejects_mismatched_representation(params, p1, vacuum_optical_joint):
    with pytest.raises(GridError):
        pair(singular_symbol("one", p1, params=params), vacuum_optical_joint)


def test_delta_derivative_term(params, p1, vacuum_joint):
    # Synthetic check of the delta-derivative machinery:
    # integral delta'(mu - c) delta(nu) J(X, mu, nu) dmu dnu = -d_mu J at (c, 0),
    # weighted over X.  The vacuum joint is analytic, so the oracle is exact.
    # 0.84375 = 9 * spacing is a node of the default 97-point mu axis, so the
    # constraint evaluation involves no interpolation, only the derivative
    # stencil's truncation error.
    c = 0.84375
    term = SingularTerm(
        lambda X: np.ones_like(X),
        constraints=(("mu", c), ("nu", 0.0)),
        derivative_constraints=(("mu", 1),),
    )
    symbol = SingularSymbol("synthetic", "symplectic", (term,), 0.0, p1)
    got = pair(symbol, vacuum_joint)

    X = vacuum_joint.grid.axes[0].points
    # J(X, mu, 0) = exp(-X^2/mu^2)/sqrt(pi mu^2) * exp(-mu^2)/pi for Fock(0).
    h = 1e-6

    def slice_at(mu):
        return np.exp(-(X**2) / mu**2) / np.sqrt(np.pi * mu**2) * np.exp(-(mu**2)) / np.pi

    dmu = (slice_at(c + h) - slice_at(c - h)) / (2 * h)
    want = -np.trapezoid(dmu, X)
    assert got.real == pytest.approx(want, rel=1e-3)
    assert abs(got.imag) < 1e-12
