"""Operator algebra on grid functions and the correspondence rules of the
tomographic and joint probability representations.

Operators are immutable expression trees over a small set of primitives;
``apply`` evaluates them on a GridFn.  No symbolic simplification is done:
identities (commutators, conjugation coherence) are verified numerically.

Axis conventions: symplectic grids are (X, mu, nu) = (0, 1, 2); optical grids
are (X, theta) = (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grids import GridFn, GridError, derivative, inverse_derivative
from .jointdist import GaussianPrior, GaussianSumPrior, Prior
from .states import OscillatorParams

__all__ = [
    "OperatorExpr",
    "Identity",
    "Scalar",
    "Coord",
    "FuncFactor",
    "Deriv",
    "InvDeriv",
    "Sum",
    "Product",
    "Representation",
    "apply",
    "position_operator",
    "momentum_operator",
    "ladder_operators",
    "conjugate_by_prior",
    "polynomial_of_operator",
    "AXIS_X",
    "AXIS_MU",
    "AXIS_NU",
    "AXIS_THETA",
    "MAX_POLY_DEGREE",
]

AXIS_X = 0
AXIS_MU = 1
AXIS_NU = 2
AXIS_THETA = 1

MAX_POLY_DEGREE = 6


# ---------------------------------------------------------------------------
# Expression tree
# ---------------------------------------------------------------------------

class OperatorExpr:
    """Base class; subclasses are frozen dataclasses."""

    def __add__(self, other):
        return Sum((self, other))

    def __matmul__(self, other):
        return Product((self, other))


@dataclass(frozen=True)
class Identity(OperatorExpr):
    pass


@dataclass(frozen=True)
class Scalar(OperatorExpr):
    value: complex


@dataclass(frozen=True)
class Coord(OperatorExpr):
    """Multiplication by a coordinate power."""

    axis: int
    power: int = 1


@dataclass(frozen=True)
class FuncFactor(OperatorExpr):
    """Multiplication by a closed-form function of one coordinate."""

    axis: int
    fn: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    label: str = ""


@dataclass(frozen=True)
class Deriv(OperatorExpr):
    axis: int
    order: int = 1


@dataclass(frozen=True)
class InvDeriv(OperatorExpr):
    axis: int
    n: int = 1


@dataclass(frozen=True)
class Sum(OperatorExpr):
    terms: tuple


@dataclass(frozen=True)
class Product(OperatorExpr):
    """Operator composition; factors act right-to-left on the argument."""

    factors: tuple


def _coord_values(f: GridFn, axis: int) -> np.ndarray:
    pts = f.axes[axis].points
    shape = [1] * f.ndim
    shape[axis] = len(pts)
    return pts.reshape(shape)


def apply(op: OperatorExpr, f: GridFn) -> GridFn:
    """Evaluate the operator on a grid function (output is complex)."""
    if isinstance(op, Identity):
        return f.with_values(f.values.astype(complex))
    if isinstance(op, Scalar):
        return f.with_values(op.value * f.values.astype(complex))
    if isinstance(op, (Coord, FuncFactor, Deriv, InvDeriv)) and not (
        0 <= op.axis < f.ndim
    ):
        raise GridError(
            f"operator references axis {op.axis} of a {f.ndim}-d grid function"
        )
    if isinstance(op, Coord):
        return f.with_values(_coord_values(f, op.axis) ** op.power * f.values.astype(complex))
    if isinstance(op, FuncFactor):
        vals = np.asarray(op.fn(f.axes[op.axis].points), dtype=complex)
        shape = [1] * f.ndim
        shape[op.axis] = f.axes[op.axis].count
        return f.with_values(vals.reshape(shape) * f.values)
    if isinstance(op, Deriv):
        return derivative(f.with_values(f.values.astype(complex)), op.axis, op.order)
    if isinstance(op, InvDeriv):
        return inverse_derivative(f.with_values(f.values.astype(complex)), op.axis, op.n)
    if isinstance(op, Sum):
        out = None
        for term in op.terms:
            g = apply(term, f)
            out = g if out is None else out.with_values(out.values + g.values)
        if out is None:
            raise GridError("empty operator sum")
        return out
    if isinstance(op, Product):
        out = f
        for factor in reversed(op.factors):
            out = apply(factor, out)
        return out.with_values(out.values.astype(complex))
    raise GridError(f"unknown operator node {op!r}")


# ---------------------------------------------------------------------------
# Representations and correspondence rules
# ---------------------------------------------------------------------------

_TAGS = ("symplectic-tomogram", "symplectic-joint", "optical-tomogram", "optical-joint")


@dataclass(frozen=True)
class Representation:
    tag: str
    params: OscillatorParams = OscillatorParams()
    prior: Optional[Prior] = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise GridError(f"unknown representation tag {self.tag!r}")
        if self.tag.endswith("-joint"):
            want = GaussianPrior if self.tag.startswith("symplectic") else GaussianSumPrior
            if not isinstance(self.prior, want):
                raise GridError(f"{self.tag} representation requires a {want.__name__}")

    @property
    def is_joint(self) -> bool:
        return self.tag.endswith("-joint")

    @property
    def is_symplectic(self) -> bool:
        return self.tag.startswith("symplectic")


def _log_deriv_factor(prior: Prior, axis: int) -> FuncFactor:
    """Multiplication by (dP/d eta)/P along the given parameter axis."""
    if isinstance(prior, GaussianPrior):
        if axis == AXIS_MU:
            return FuncFactor(
                axis, lambda mu: -2.0 * (mu - prior.mu0) / prior.xi**2, "dP/P d_mu"
            )
        if axis == AXIS_NU:
            return FuncFactor(
                axis, lambda nu: -2.0 * (nu - prior.nu0) / prior.zeta**2, "dP/P d_nu"
            )
        raise GridError(f"symplectic prior has no parameter axis {axis}")
    if axis != AXIS_THETA:
        raise GridError(f"optical prior has no parameter axis {axis}")
    return FuncFactor(axis, lambda th: prior.deriv_ratio(th, 1), "dP/P d_theta")


def position_operator(rep: Representation) -> OperatorExpr:
    """Correspondence rule for the position operator.

    Symplectic-tomogram: -d_mu dX^-1 + (i hbar nu / 2) dX; joint forms absorb
    the prior's logarithmic derivative into the parameter-derivative term.
    """
    hb = rep.params.hbar
    m, w = rep.params.mass, rep.params.omega
    if rep.is_symplectic:
        dmu: OperatorExpr = Deriv(AXIS_MU)
        if rep.is_joint:
            dmu = Sum((dmu, Product((Scalar(-1.0), _log_deriv_factor(rep.prior, AXIS_MU)))))
        return Sum((
            Product((Scalar(-1.0), dmu, InvDeriv(AXIS_X))),
            Product((Scalar(0.5j * hb), Coord(AXIS_NU), Deriv(AXIS_X))),
        ))
    dth: OperatorExpr = Deriv(AXIS_THETA)
    if rep.is_joint:
        dth = Sum((dth, Product((Scalar(-1.0), _log_deriv_factor(rep.prior, AXIS_THETA)))))
    sin = FuncFactor(AXIS_THETA, np.sin, "sin")
    cos = FuncFactor(AXIS_THETA, np.cos, "cos")
    return Sum((
        Product((sin, InvDeriv(AXIS_X), dth)),
        Product((Coord(AXIS_X), cos)),
        Product((Scalar(0.5j * hb / (m * w)), sin, Deriv(AXIS_X))),
    ))


def momentum_operator(rep: Representation) -> OperatorExpr:
    """Correspondence rule for the momentum operator.

    Symplectic-tomogram: -d_nu dX^-1 - (i hbar mu / 2) dX.  The sign of the
    i mu term is fixed by [q, p] = i hbar and by consistency with the ladder
    operators; the joint form inherits it unchanged under conjugation.
    """
    hb = rep.params.hbar
    m, w = rep.params.mass, rep.params.omega
    if rep.is_symplectic:
        dnu: OperatorExpr = Deriv(AXIS_NU)
        if rep.is_joint:
            dnu = Sum((dnu, Product((Scalar(-1.0), _log_deriv_factor(rep.prior, AXIS_NU)))))
        return Sum((
            Product((Scalar(-1.0), dnu, InvDeriv(AXIS_X))),
            Product((Scalar(-0.5j * hb), Coord(AXIS_MU), Deriv(AXIS_X))),
        ))
    dth: OperatorExpr = Deriv(AXIS_THETA)
    if rep.is_joint:
        dth = Sum((dth, Product((Scalar(-1.0), _log_deriv_factor(rep.prior, AXIS_THETA)))))
    sin = FuncFactor(AXIS_THETA, np.sin, "sin")
    cos = FuncFactor(AXIS_THETA, np.cos, "cos")
    return Sum((
        Product((Scalar(-m * w), cos, InvDeriv(AXIS_X), dth)),
        Product((Scalar(m * w), Coord(AXIS_X), sin)),
        Product((Scalar(-0.5j * hb), cos, Deriv(AXIS_X))),
    ))


def ladder_operators(rep: Representation) -> tuple[OperatorExpr, OperatorExpr]:
    """(annihilation, creation) correspondence rules, symplectic only."""
    if not rep.is_symplectic:
        raise GridError("ladder operators are available only in symplectic representations")
    m, w, hb = rep.params.mass, rep.params.omega, rep.params.hbar
    root = np.sqrt(m * w / (2 * hb))

    def one(sign: float) -> OperatorExpr:
        # sign=+1: annihilation; sign=-1: creation
        grad = [
            Deriv(AXIS_MU),
            Product((Scalar(sign * 1j / (m * w)), Deriv(AXIS_NU))),
        ]
        if rep.is_joint:
            pr: GaussianPrior = rep.prior
            grad.append(FuncFactor(
                AXIS_MU, lambda mu: 2.0 * (mu - pr.mu0) / pr.xi**2, "2(mu-mu0)/xi^2"
            ))
            grad.append(Product((
                Scalar(sign * 2j / (m * w * pr.zeta**2)),
                FuncFactor(AXIS_NU, lambda nu: nu - pr.nu0, "nu-nu0"),
            )))
        lead = Sum((
            Product((Scalar(sign / (m * w)), Coord(AXIS_MU))),
            Product((Scalar(1j), Coord(AXIS_NU))),
        ))
        return Product((Scalar(root), Sum((
            Product((Scalar(hb / 2), Deriv(AXIS_X), lead)),
            Product((Scalar(-1.0), InvDeriv(AXIS_X), Sum(tuple(grad)))),
        ))))

    return one(1.0), one(-1.0)


def conjugate_by_prior(op: OperatorExpr, prior: Prior) -> OperatorExpr:
    """Rewrite P op P^-1 using closed-form logarithmic prior derivatives.

    Parameter-axis derivatives transform as d -> d - (dP/P); second
    derivatives as d^2 - 2(dP/P)d + 2(dP/P)^2 - (d^2P/P).  Everything else
    commutes with multiplication by the prior.
    """
    if isinstance(prior, GaussianPrior):
        param_axes = (AXIS_MU, AXIS_NU)
    else:
        param_axes = (AXIS_THETA,)

    def second_extra(axis: int) -> FuncFactor:
        # 2 L^2 - P''/P with L = P'/P, in closed form per prior type
        if isinstance(prior, GaussianPrior):
            if axis == AXIS_MU:
                c, s = prior.mu0, prior.xi
            else:
                c, s = prior.nu0, prior.zeta
            return FuncFactor(
                axis,
                lambda x, c=c, s=s: 4.0 * (x - c) ** 2 / s**4 + 2.0 / s**2,
                "2L^2-P''/P",
            )
        return FuncFactor(
            axis,
            lambda th: 2.0 * prior.deriv_ratio(th, 1) ** 2 - prior.deriv_ratio(th, 2),
            "2L^2-P''/P",
        )

    def rewrite(node: OperatorExpr) -> OperatorExpr:
        if isinstance(node, Deriv) and node.axis in param_axes:
            L = _log_deriv_factor(prior, node.axis)
            if node.order == 1:
                return Sum((node, Product((Scalar(-1.0), L))))
            return Sum((
                Deriv(node.axis, 2),
                Product((Scalar(-2.0), L, Deriv(node.axis))),
                second_extra(node.axis),
            ))
        if isinstance(node, Sum):
            return Sum(tuple(rewrite(t) for t in node.terms))
        if isinstance(node, Product):
            return Product(tuple(rewrite(t) for t in node.factors))
        if isinstance(node, (Identity, Scalar, Coord, FuncFactor, Deriv, InvDeriv)):
            return node
        raise GridError(f"no conjugation rule for {node!r}")

    return rewrite(op)


def polynomial_of_operator(op: OperatorExpr, coefficients) -> OperatorExpr:
    """Horner composition of c0 + c1 op + ... + cd op^d (degree <= 6)."""
    coeffs = [complex(c) for c in coefficients]
    if len(coeffs) - 1 > MAX_POLY_DEGREE:
        raise GridError(
            f"polynomial degree {len(coeffs) - 1} exceeds cap {MAX_POLY_DEGREE}"
        )
    if not coeffs:
        return Scalar(0.0)
    acc: OperatorExpr = Scalar(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = Sum((Scalar(c), Product((acc, op))))
    return acc
