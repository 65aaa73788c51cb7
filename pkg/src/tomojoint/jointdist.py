"""Gaussian parameter priors and the Bayes step turning tomograms into joint
probability distributions.

The symplectic prior is a product of two Gaussians over the reference-frame
parameters (mu, nu); the optical prior is a convex mixture of Gaussians over
the rotation angle, each component truncated and renormalized on [0, pi].
All derivatives are evaluated in closed form through the physicists' Hermite
polynomials, d^n/dx^n exp(-x^2) = (-1)^n H_n(x) exp(-x^2).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, eval_hermite

from .grids import GridFn, GridError, integrate
from .states import OscillatorParams
from .tomography import Tomogram

__all__ = [
    "GaussianPrior",
    "GaussianSumPrior",
    "Prior",
    "JointDistribution",
    "parse_prior",
    "prior_eval",
    "prior_log_derivative",
    "make_joint",
    "recover_conditional",
    "prior_moment_integral",
    "PRIOR_FLOOR",
]

# Values below this are treated as vanishing when dividing by a prior.
PRIOR_FLOOR = 1e-280


@dataclass(frozen=True)
class GaussianPrior:
    """Product prior over the symplectic frame parameters,
    P(mu, nu) = (pi xi zeta)^-1 exp(-(mu-mu0)^2/xi^2) exp(-(nu-nu0)^2/zeta^2).
    """

    mu0: float = 0.0
    nu0: float = 0.0
    xi: float = 1.0
    zeta: float = 1.0

    def __post_init__(self):
        if self.xi <= 0 or self.zeta <= 0:
            raise ValueError("prior widths xi, zeta must be positive")

    def eval(self, mu, nu):
        mu = np.asarray(mu, dtype=float)
        nu = np.asarray(nu, dtype=float)
        return (
            np.exp(-((mu - self.mu0) ** 2) / self.xi**2)
            * np.exp(-((nu - self.nu0) ** 2) / self.zeta**2)
            / (np.pi * self.xi * self.zeta)
        )

    def deriv_ratio(self, mu, nu, k: int = 0, l: int = 0):
        """(d^k/dmu^k d^l/dnu^l P) / P, exact via Hermite polynomials."""
        mu = np.asarray(mu, dtype=float)
        nu = np.asarray(nu, dtype=float)
        out = np.ones(np.broadcast_shapes(mu.shape, nu.shape))
        if k:
            out = out * (-1.0 / self.xi) ** k * eval_hermite(k, (mu - self.mu0) / self.xi)
        if l:
            out = out * (-1.0 / self.zeta) ** l * eval_hermite(l, (nu - self.nu0) / self.zeta)
        return out

    def log_derivative(self, mu, nu, axis: str):
        """dP/P along one parameter axis (the logarithmic derivative)."""
        if axis == "mu":
            return -2.0 * (np.asarray(mu, dtype=float) - self.mu0) / self.xi**2
        if axis == "nu":
            return -2.0 * (np.asarray(nu, dtype=float) - self.nu0) / self.zeta**2
        raise ValueError(f"axis must be 'mu' or 'nu', got {axis!r}")


@dataclass(frozen=True)
class GaussianSumPrior:
    """Mixture prior over the optical rotation angle on [0, pi].

    ``components`` is a tuple of (weight, center, width) triples; the weights
    must sum to one and each component is normalized on the truncated domain
    through the error function.
    """

    components: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("prior needs at least one component")
        total = 0.0
        for q, f, phi in self.components:
            if q <= 0 or phi <= 0:
                raise ValueError("component weights and widths must be positive")
            total += q
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"component weights sum to {total!r}, expected 1")

    def _normalizers(self):
        # integral of exp(-(theta-f)^2/phi^2) over [0, pi]
        return [
            1.0
            / (0.5 * phi * math.sqrt(math.pi) * (erf((math.pi - f) / phi) + erf(f / phi)))
            for _, f, phi in self.components
        ]

    def eval(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        for (q, f, phi), nk in zip(self.components, self._normalizers()):
            out = out + q * nk * np.exp(-((theta - f) ** 2) / phi**2)
        return out

    def deriv(self, theta, order: int = 1):
        """Closed-form d^n P/dtheta^n."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        for (q, f, phi), nk in zip(self.components, self._normalizers()):
            x = (theta - f) / phi
            out = out + q * nk * (-1.0 / phi) ** order * eval_hermite(order, x) * np.exp(-(x**2))
        return out

    def deriv_ratio(self, theta, order: int = 1):
        """d^n P / P with floor protection far in the tails."""
        P = self.eval(theta)
        return self.deriv(theta, order) / np.maximum(P, PRIOR_FLOOR)

    @property
    def is_single_peak(self) -> bool:
        return len(self.components) == 1


Prior = GaussianPrior | GaussianSumPrior


def parse_prior(text: str) -> Prior:
    """Parse CLI prior strings.

    ``p1:mu0=0,nu0=0,xi=1,zeta=1`` builds a symplectic prior;
    ``p2:[{"q":0.6,"f":1.0472,"phi":0.7},...]`` (bare keys also accepted)
    builds the optical mixture.
    """
    kind, _, rest = text.partition(":")
    if kind == "p1":
        kv = {}
        try:
            for item in filter(None, rest.split(",")):
                k, _, v = item.partition("=")
                kv[k.strip()] = float(v)
            return GaussianPrior(**kv)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"cannot parse prior spec {text!r}: {exc}") from exc
    if kind == "p2":
        try:
            payload = re.sub(r"([{,]\s*)([a-zA-Z_]\w*)(\s*:)", r'\1"\2"\3', rest)
            comps = json.loads(payload)
            return GaussianSumPrior(
                tuple((float(c["q"]), float(c["f"]), float(c["phi"])) for c in comps)
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"cannot parse prior spec {text!r}: {exc}") from exc
    raise ValueError(f"unknown prior kind in {text!r} (expected p1 or p2)")


@dataclass(frozen=True)
class JointDistribution:
    """Tomogram times prior: the joint probability of the quadrature and the
    frame parameters."""

    representation: str  # "symplectic" | "optical"
    grid: GridFn
    prior: Prior
    params: OscillatorParams

    def __post_init__(self):
        want = "symplectic" if isinstance(self.prior, GaussianPrior) else "optical"
        if self.representation != want:
            raise GridError(
                f"prior type {type(self.prior).__name__} does not match "
                f"{self.representation} representation"
            )


def prior_eval(prior: Prior, *points) -> np.ndarray:
    """Prior values at the given coordinate arrays: (mu, nu) for the
    symplectic prior, (theta,) for the optical one."""
    if isinstance(prior, GaussianPrior):
        return prior.eval(*points)
    (theta,) = points
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < -1e-12) or np.any(theta > np.pi + 1e-12):
        raise GridError("optical prior evaluated outside [0, pi]")
    return prior.eval(theta)


def prior_log_derivative(prior: Prior, variable: str, points) -> np.ndarray:
    """(dP/d variable)/P in closed form; raises on prior underflow."""
    if isinstance(prior, GaussianPrior):
        pts = np.asarray(points, dtype=float)
        if variable == "mu":
            return prior.log_derivative(pts, 0.0, "mu")
        if variable == "nu":
            return prior.log_derivative(0.0, pts, "nu")
        raise ValueError(f"symplectic prior has no variable {variable!r}")
    if variable != "theta":
        raise ValueError(f"optical prior has no variable {variable!r}")
    P = prior.eval(np.asarray(points, dtype=float))
    if np.any(P < PRIOR_FLOOR):
        raise GridError("prior underflow on grid")
    return prior.deriv(np.asarray(points, dtype=float), 1) / P


def _prior_on_grid(f: GridFn, prior: Prior) -> np.ndarray:
    if isinstance(prior, GaussianPrior):
        if f.ndim != 3:
            raise GridError("symplectic prior expects a 3-d (X, mu, nu) grid function")
        mu = f.axes[1].points[:, None]
        nu = f.axes[2].points[None, :]
        return prior.eval(mu, nu)[None, :, :]
    if f.ndim != 2:
        raise GridError("optical prior expects a 2-d (X, theta) grid function")
    return prior.eval(f.axes[1].points)[None, :]


def make_joint(tomogram: Tomogram, prior: Prior, norm_tol: float = 1e-2) -> JointDistribution:
    """Bayes step: joint = tomogram * prior over the frame parameters."""
    want = "symplectic" if isinstance(prior, GaussianPrior) else "optical"
    if tomogram.representation != want:
        raise GridError(
            f"{tomogram.representation} tomogram cannot take a "
            f"{type(prior).__name__}"
        )
    grid = tomogram.grid.with_values(
        tomogram.grid.values * _prior_on_grid(tomogram.grid, prior)
    )
    mass = integrate(grid, tuple(range(grid.ndim)))
    if abs(mass - 1.0) > norm_tol:
        raise GridError(
            f"joint distribution mass {mass:.4f} drifted beyond {norm_tol:.0e}"
        )
    return JointDistribution(tomogram.representation, grid, prior, tomogram.params)


def recover_conditional(joint: JointDistribution) -> Tomogram:
    """Inverse of :func:`make_joint`: pointwise division by the stored prior."""
    P = _prior_on_grid(joint.grid, joint.prior)
    if np.any(P < PRIOR_FLOOR):
        raise GridError("prior underflow on grid")
    grid = joint.grid.with_values(joint.grid.values / P)
    return Tomogram(joint.representation, grid, joint.params)


def prior_moment_integral(
    prior: GaussianPrior,
    k: int,
    l: int,
    alpha: int | None = None,
    beta: int | None = None,
) -> float:
    """Integral of mu^alpha nu^beta d^k_mu d^l_nu P over the plane.

    Defaults alpha=k, beta=l, in which case the exact value is
    (-1)^(k+l) k! l!.  Uses a private wide quadrature grid (mean +/- 7 widths)
    because the integrand factorizes and decays like a Gaussian there; the
    caller's tomography grids would truncate wide priors.
    """
    if not isinstance(prior, GaussianPrior):
        raise TypeError("moment integrals are defined for the symplectic prior")
    if alpha is None:
        alpha = k
    if beta is None:
        beta = l

    def axis_integral(center, width, exponent, order):
        x = np.linspace(center - 7 * width, center + 7 * width, 561)
        g = np.exp(-((x - center) ** 2) / width**2) / (math.sqrt(math.pi) * width)
        dg = (-1.0 / width) ** order * eval_hermite(order, (x - center) / width) * g
        return np.trapezoid(x**exponent * dg, x)

    return float(
        axis_integral(prior.mu0, prior.xi, alpha, k)
        * axis_integral(prior.nu0, prior.zeta, beta, l)
    )
