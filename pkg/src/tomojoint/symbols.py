"""Dual symbols of observables and expectation values by pairing.

A dual symbol is a generalized function s(X, parameters) such that
integral of s times the joint distribution over all variables equals the
expectation value of the observable.  Two families are provided: smooth
("regular") symbols, paired by full-grid quadrature, and delta-supported
("singular") symbols, paired by slicing the joint at the support.

The regular symbols depend on the prior and compensate it by construction,
so the paired value is prior independent.  Singular forms exist in the
symplectic representation only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grids import GridError, derivative
from .jointdist import (
    GaussianPrior,
    GaussianSumPrior,
    JointDistribution,
    Prior,
    PRIOR_FLOOR,
)
from .states import OscillatorParams

__all__ = [
    "RegularSymbol",
    "SingularTerm",
    "SingularSymbol",
    "regular_symbol",
    "singular_symbol",
    "alternative_regular_symbols_q2_p2",
    "monomial_regular_symbol",
    "pair",
    "REGULAR_NAMES",
    "SINGULAR_NAMES",
]

REGULAR_NAMES = ("q", "p", "q2", "p2", "qp", "n")
SINGULAR_NAMES = ("one", "q", "p", "qp", "qn", "pn", "number")

MAX_MONOMIAL_ORDER = 4


@dataclass(frozen=True)
class RegularSymbol:
    """Smooth dual symbol: a closed-form complex evaluator over the joint
    grid variables -- (X, mu, nu) symplectic, (X, theta) optical."""

    name: str
    representation: str  # "symplectic" | "optical"
    fn: Callable[..., np.ndarray] = field(compare=False)
    prior: Prior | None = None


@dataclass(frozen=True)
class SingularTerm:
    """One delta-product term: weight(X) times delta factors pinning
    parameter axes to support values, optionally differentiated."""

    weight: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    constraints: tuple[tuple[str, float], ...] = ()
    derivative_constraints: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True)
class SingularSymbol:
    """Delta-supported dual symbol: a sum of slice terms plus an additive
    constant.  Never materialized on the grid; pairing interpolates."""

    name: str
    representation: str
    terms: tuple[SingularTerm, ...]
    constant: complex = 0.0
    prior: Prior | None = None


def _symplectic_regular(name: str, prior: GaussianPrior, params: OscillatorParams):
    m, w, hb = params.mass, params.omega, params.hbar
    mu0, nu0, xi, zeta = prior.mu0, prior.nu0, prior.xi, prior.zeta

    if name == "q":
        return lambda X, mu, nu: 2 * (mu - mu0) * X / xi**2 + 0j
    if name == "p":
        return lambda X, mu, nu: 2 * (nu - nu0) * X / zeta**2 + 0j
    if name == "q2":
        return lambda X, mu, nu: X**2 * (2 * (mu - mu0) ** 2 - xi**2) / xi**4 + 0j
    if name == "p2":
        return lambda X, mu, nu: X**2 * (2 * (nu - nu0) ** 2 - zeta**2) / zeta**4 + 0j
    if name == "qp":
        return (
            lambda X, mu, nu: 2 * X**2 * (mu - mu0) * (nu - nu0) / (xi**2 * zeta**2)
            + 0.5j * hb
        )
    if name == "n":
        return lambda X, mu, nu: (
            (X**2 * m * w / (2 * hb))
            * (
                (2 * (mu - mu0) ** 2 - xi**2) / xi**4
                + (2 * (nu - nu0) ** 2 - zeta**2) / (m**2 * w**2 * zeta**4)
            )
            - 0.5
            + 0j
        )
    raise ValueError(f"unknown regular symbol {name!r}")


def _optical_regular(name: str, prior: GaussianSumPrior, params: OscillatorParams):
    m, w, hb = params.mass, params.omega, params.hbar

    def invP(theta):
        return 1.0 / (np.pi * np.maximum(prior.eval(theta), PRIOR_FLOOR))

    if name == "q":
        return lambda X, th: 2 * X * np.cos(th) * invP(th) + 0j
    if name == "p":
        return lambda X, th: 2 * m * w * X * np.sin(th) * invP(th) + 0j
    if name == "q2":
        return lambda X, th: X**2 * (1 + 2 * np.cos(2 * th)) * invP(th) + 0j
    if name == "p2":
        return lambda X, th: X**2 * m**2 * w**2 * (1 - 2 * np.cos(2 * th)) * invP(th) + 0j
    if name == "qp":
        return lambda X, th: 2 * m * w * X**2 * np.sin(2 * th) * invP(th) + 0.5j * hb
    if name == "n":
        # n = (m w q^2/hb + p^2/(hb m w) - 1)/2 from the quadratic symbols
        return lambda X, th: (
            0.5
            * (m * w / hb)
            * X**2
            * ((1 + 2 * np.cos(2 * th)) + (1 - 2 * np.cos(2 * th)))
            * invP(th)
            - 0.5
            + 0j
        )
    raise ValueError(f"unknown regular symbol {name!r}")


def regular_symbol(
    name: str,
    rep: str,
    prior: Prior,
    params: OscillatorParams = OscillatorParams(),
) -> RegularSymbol:
    """Closed-form smooth dual symbol for q, p, q2, p2, qp or n."""
    if rep == "symplectic":
        if not isinstance(prior, GaussianPrior):
            raise GridError("symplectic symbols need a GaussianPrior")
        return RegularSymbol(name, rep, _symplectic_regular(name, prior, params), prior)
    if rep == "optical":
        if not isinstance(prior, GaussianSumPrior):
            raise GridError("optical symbols need a GaussianSumPrior")
        return RegularSymbol(name, rep, _optical_regular(name, prior, params), prior)
    raise ValueError(f"unknown representation {rep!r}")


def monomial_regular_symbol(
    k: int, l: int, prior: GaussianPrior, params: OscillatorParams = OscillatorParams()
) -> RegularSymbol:
    """Symbol of the Weyl-symmetrized phase-space moment q^k p^l.

    Pairing evaluates the symmetrized moment (the average of q^k p^l over
    the Wigner quasidistribution); operator-ordered products differ from it
    by commutator corrections, e.g. the +i hbar/2 of the ordered qp symbol.
    """
    if k < 0 or l < 0 or k + l > MAX_MONOMIAL_ORDER:
        raise ValueError(f"monomial order k+l={k + l} exceeds cap {MAX_MONOMIAL_ORDER}")
    if not isinstance(prior, GaussianPrior):
        raise GridError("monomial symbols are symplectic; need a GaussianPrior")
    sign = (-1.0) ** (k + l)
    fact = math.factorial(k + l)

    def fn(X, mu, nu):
        return sign * X ** (k + l) / fact * prior.deriv_ratio(mu, nu, k, l) + 0j

    return RegularSymbol(f"moment({k},{l})", "symplectic", fn, prior)


def alternative_regular_symbols_q2_p2(
    prior: GaussianPrior, params: OscillatorParams = OscillatorParams()
) -> tuple[RegularSymbol, RegularSymbol]:
    """Exponential-weighted alternative symbols for q^2 and p^2.

    They differ from the primary quadratic symbols pointwise but give the
    same pairings with every physical joint distribution -- the dual symbol
    of an operator is unique only as a generalized function.
    """
    mu0, nu0, xi, zeta = prior.mu0, prior.nu0, prior.xi, prior.zeta

    def envelope(mu, nu):
        return np.exp(
            -mu0 * (2 * mu - mu0) / xi**2 - nu0 * (2 * nu - nu0) / zeta**2
        )

    def q2(X, mu, nu):
        return (
            X**2 / (2 * xi**2) * (3 * mu**2 / xi**2 - nu**2 / zeta**2) * envelope(mu, nu)
            + 0j
        )

    def p2(X, mu, nu):
        return (
            X**2
            / (2 * zeta**2)
            * (3 * nu**2 / zeta**2 - mu**2 / xi**2)
            * envelope(mu, nu)
            + 0j
        )

    return (
        RegularSymbol("q2(alt)", "symplectic", q2, prior),
        RegularSymbol("p2(alt)", "symplectic", p2, prior),
    )


def _power_weight(coeff: complex, n: int):
    if n == 0:
        return lambda X: np.full_like(np.asarray(X, dtype=float), coeff, dtype=complex)
    return lambda X: coeff * np.asarray(X, dtype=float) ** n + 0j


def _singular_terms(
    name: str, n: int | None, prior: GaussianPrior, params: OscillatorParams
) -> tuple[tuple[SingularTerm, ...], complex]:
    m, w, hb = params.mass, params.omega, params.hbar
    mu0, nu0, xi, zeta = prior.mu0, prior.nu0, prior.xi, prior.zeta
    # Exponents of the prior evaluated at the four support corners.
    a = mu0**2 / xi**2
    A = (xi - mu0) ** 2 / xi**2
    b = nu0**2 / zeta**2
    B = (zeta - nu0) ** 2 / zeta**2

    def term(coeff, power, mu_s, nu_s):
        return SingularTerm(_power_weight(coeff, power), (("mu", mu_s), ("nu", nu_s)))

    if name == "one":
        return (term(np.pi * xi * zeta * math.exp(a + b), 0, 0.0, 0.0),), 0.0
    if name in ("q", "qn"):
        n = 1 if name == "q" else n
        if n is None or n < 1:
            raise ValueError("qn needs a positive power")
        coeff = np.pi * zeta / xi ** (n - 1) * math.exp(A + b)
        return (term(coeff, n, xi, 0.0),), 0.0
    if name in ("p", "pn"):
        n = 1 if name == "p" else n
        if n is None or n < 1:
            raise ValueError("pn needs a positive power")
        coeff = np.pi * xi / zeta ** (n - 1) * math.exp(a + B)
        return (term(coeff, n, 0.0, zeta),), 0.0
    if name == "qp":
        half_pi = 0.5 * np.pi
        return (
            term(half_pi * math.exp(A + B), 2, xi, zeta),
            term(-half_pi * math.exp(A + b), 2, xi, 0.0),
            term(-half_pi * math.exp(a + B), 2, 0.0, zeta),
            # ordering correction +i hbar/2, written as a slice at the origin
            term(0.5j * np.pi * hb * xi * zeta * math.exp(a + b), 0, 0.0, 0.0),
        ), 0.0
    if name == "number":
        # a^dag a = (m w q^2/hb + p^2/(hb m w) - 1)/2
        (q2_term,), _ = _singular_terms("qn", 2, prior, params)
        (p2_term,), _ = _singular_terms("pn", 2, prior, params)
        (one_term,), _ = _singular_terms("one", None, prior, params)

        def scaled(t: SingularTerm, s: float) -> SingularTerm:
            return SingularTerm(
                (lambda base, ss: (lambda X: ss * base(X)))(t.weight, s),
                t.constraints,
                t.derivative_constraints,
            )

        return (
            scaled(q2_term, 0.5 * m * w / hb),
            scaled(p2_term, 0.5 / (hb * m * w)),
            scaled(one_term, -0.5),
        ), 0.0
    raise ValueError(f"unknown singular symbol {name!r}")


def singular_symbol(
    name: str,
    prior: GaussianPrior,
    n: int | None = None,
    params: OscillatorParams = OscillatorParams(),
) -> SingularSymbol:
    """Delta-supported dual symbol (symplectic representation only).

    ``name`` is one of one|q|p|qp|qn|pn|number; ``qn``/``pn`` take the power
    through ``n``.  The identity symbol uses the exponent mu0^2/xi^2; with
    any other scaling its pairing fails to return 1 for off-center priors,
    which the verification report records as a formula deviation.
    """
    if not isinstance(prior, GaussianPrior):
        raise GridError("singular symbols exist in the symplectic representation only")
    terms, constant = _singular_terms(name, n, prior, params)
    label = f"{name}({n})" if name in ("qn", "pn") else name
    return SingularSymbol(label, "symplectic", terms, constant, prior)


def _interp_index(axisp, value: float, name: str):
    lo, hi = axisp.points[0], axisp.points[-1]
    if not (lo - 1e-12 <= value <= hi + 1e-12):
        raise GridError(
            f"singular support {name}={value:g} outside the parameter grid hull "
            f"[{lo:g}, {hi:g}]"
        )
    pos = (value - lo) / axisp.spacing
    i0 = min(int(np.floor(pos)), axisp.count - 2)
    return i0, pos - i0


def _pair_singular_term(term: SingularTerm, joint: JointDistribution) -> complex:
    grid = joint.grid
    names = [ax.name for ax in grid.axes]
    values = grid.values.astype(complex)

    for axis_name, order in term.derivative_constraints:
        if axis_name not in names:
            raise GridError(f"no axis named {axis_name!r} on the joint grid")
        idx = names.index(axis_name)
        # integral of delta^(n)(x-c) f(x) dx = (-1)^n f^(n)(c)
        deriv = derivative(grid.with_values(values.real), idx, order).values.astype(
            complex
        )
        deriv += 1j * derivative(grid.with_values(values.imag), idx, order).values
        values = (-1.0) ** order * deriv

    # Slice the constrained parameter axes by linear interpolation, highest
    # axis index first so earlier indices stay valid.
    constraints = sorted(
        term.constraints, key=lambda c: names.index(c[0]), reverse=True
    )
    for axis_name, support in constraints:
        if axis_name not in names:
            raise GridError(f"no axis named {axis_name!r} on the joint grid")
        idx = names.index(axis_name)
        i0, frac = _interp_index(grid.axes[idx], support, axis_name)
        lo = np.take(values, i0, axis=idx)
        hi = np.take(values, i0 + 1, axis=idx)
        values = (1 - frac) * lo + frac * hi

    if values.ndim != 1:
        raise GridError("singular term must constrain every parameter axis")
    x = grid.axes[0].points
    return complex(np.trapezoid(term.weight(x) * values, x))


def pair(symbol: RegularSymbol | SingularSymbol, joint: JointDistribution) -> complex:
    """Expectation value: integral of symbol times joint distribution."""
    if symbol.representation != joint.representation:
        raise GridError(
            f"{symbol.representation} symbol paired with "
            f"{joint.representation} joint"
        )
    if symbol.prior is not None and symbol.prior != joint.prior:
        raise GridError("symbol and joint were built with different priors")

    if isinstance(symbol, RegularSymbol):
        mesh = joint.grid.meshgrid()
        integrand = symbol.fn(*mesh) * joint.grid.values
        out = integrand
        for ax in reversed(joint.grid.axes):
            out = np.trapezoid(out, dx=ax.spacing, axis=-1)
        return complex(out)

    total = complex(symbol.constant)
    for term in symbol.terms:
        total += _pair_singular_term(term, joint)
    return total
