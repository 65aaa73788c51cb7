"""Tomograms of oscillator states: Radon-type transforms of the Wigner
function, analytic Gaussian oracles, and Wigner reconstruction.

The symplectic tomogram is the distribution of X = mu*q + nu*p; the optical
tomogram is its restriction to directions (cos theta, sin theta/(m omega)).
Line integrals are taken literally: each (X, parameter) slice integrates the
Wigner function along the corresponding straight line in phase space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grids import Axis, GridFn, GridError, integrate
from .states import OscillatorParams, StateSpec, _gaussian_moments, state_label

__all__ = [
    "Tomogram",
    "symplectic_tomogram",
    "optical_tomogram",
    "tomogram_analytic",
    "wigner_from_symplectic",
    "SLICE_NORM_TOL",
]

# Per-slice normalization drift beyond which a slice is rescaled to unit mass
# (the X window clips the tails of wide slices at large |mu|, |nu|).
SLICE_NORM_TOL = 1e-3


@dataclass(frozen=True)
class Tomogram:
    """A tomographic probability family: grid over (X, mu, nu) for the
    symplectic representation, (X, theta) for the optical one."""

    representation: str  # "symplectic" | "optical"
    grid: GridFn
    params: OscillatorParams

    def __post_init__(self):
        if self.representation not in ("symplectic", "optical"):
            raise GridError(f"unknown representation {self.representation!r}")
        want = 3 if self.representation == "symplectic" else 2
        if self.grid.ndim != want:
            raise GridError(
                f"{self.representation} tomogram needs a {want}-d grid, "
                f"got {self.grid.ndim}-d"
            )


def _radon_slices(
    W: GridFn,
    X_axis: Axis,
    mus: np.ndarray,
    nus: np.ndarray,
    interp_order: int = 3,
    chunk: int = 128,
) -> np.ndarray:
    """Line integrals of W for each direction pair, all X at once.

    Returns array of shape (len(mus), X_axis.count).  The line X = mu q + nu p
    is parameterized by arclength around its closest point to the origin; the
    delta kernel contributes a factor 1/r with r = sqrt(mu^2 + nu^2).
    """
    q_axis, p_axis = W.axes
    r2 = mus**2 + nus**2
    if np.any(r2 < 1e-12):
        raise GridError("tomogram undefined at mu=nu=0 grid point")
    r = np.sqrt(r2)

    # Arclength samples: |line point|^2 = (X/r)^2 + s^2, and W is negligible
    # outside the grid, so a fixed symmetric s range at grid resolution works
    # for every slice.
    h_s = min(q_axis.spacing, p_axis.spacing)
    s_max = 0.5 * max(q_axis.hi - q_axis.lo, p_axis.hi - p_axis.lo) + h_s
    s = np.arange(-s_max, s_max + h_s / 2, h_s)

    filtered = (
        ndimage.spline_filter(W.values, order=interp_order, mode="constant")
        if interp_order > 1
        else W.values
    )
    X = X_axis.points
    out = np.empty((len(mus), X_axis.count))
    for lo in range(0, len(mus), chunk):
        hi = min(lo + chunk, len(mus))
        mu = mus[lo:hi, None, None]
        nu = nus[lo:hi, None, None]
        rr2 = r2[lo:hi, None, None]
        rr = r[lo:hi, None, None]
        # closest point + s * unit tangent (-nu, mu)/r
        q = X[None, :, None] * mu / rr2 - s[None, None, :] * nu / rr
        p = X[None, :, None] * nu / rr2 + s[None, None, :] * mu / rr
        iq = (q - q_axis.lo) / q_axis.spacing
        ip = (p - p_axis.lo) / p_axis.spacing
        vals = ndimage.map_coordinates(
            filtered,
            [iq.ravel(), ip.ravel()],
            order=interp_order,
            mode="constant",
            cval=0.0,
            prefilter=False,
        ).reshape(q.shape)
        out[lo:hi] = np.trapezoid(vals, dx=h_s, axis=2) / r[lo:hi, None]
    return out


def _renormalize_slices(slices: np.ndarray, X_axis: Axis, always: bool = False):
    """Rescale slices whose X-mass drifted beyond SLICE_NORM_TOL (window
    clipping); returns (slices, n_rescaled)."""
    mass = np.trapezoid(slices, dx=X_axis.spacing, axis=-1)
    bad = np.abs(mass - 1.0) > SLICE_NORM_TOL if not always else np.ones_like(mass, bool)
    bad &= mass > 1e-12
    out = np.where(bad[..., None], slices / np.where(bad, mass, 1.0)[..., None], slices)
    return out, int(np.count_nonzero(bad))


def symplectic_tomogram(
    W: GridFn,
    X_axis: Axis,
    mu_axis: Axis,
    nu_axis: Axis,
    params: OscillatorParams = OscillatorParams(),
    interp_order: int = 3,
) -> Tomogram:
    """Radon transform of the Wigner function over the (mu, nu) frame grid.

    If (0, 0) is itself a grid point the delta-distribution slice is stored as
    a nascent Gaussian of width h_X and flagged; any other direction with
    |mu| + |nu| < 1e-6 is an error.
    """
    mu_g, nu_g = np.meshgrid(mu_axis.points, nu_axis.points, indexing="ij")
    mu_f, nu_f = mu_g.ravel(), nu_g.ravel()
    origin = (mu_f == 0.0) & (nu_f == 0.0)
    near = (np.abs(mu_f) + np.abs(nu_f) < 1e-6) & ~origin
    if np.any(near):
        raise GridError("tomogram undefined at mu=nu=0 grid point")

    # The transform is even under (X, mu, nu) -> (-X, -mu, -nu); on symmetric
    # axes only half of the parameter plane needs explicit line integrals.
    symmetric = all(
        abs(ax.lo + ax.hi) < 1e-12 * (ax.hi - ax.lo)
        for ax in (X_axis, mu_axis, nu_axis)
    )
    regular = ~origin
    if symmetric:
        regular &= (nu_f > 0) | ((nu_f == 0) & (mu_f > 0))

    slices = np.empty((mu_f.size, X_axis.count))
    slices[regular] = _radon_slices(
        W, X_axis, mu_f[regular], nu_f[regular], interp_order=interp_order
    )
    if symmetric:
        cube = slices.reshape(mu_axis.count, nu_axis.count, X_axis.count)
        mirrored = cube[::-1, ::-1, ::-1].copy()
        keep = (regular | origin).reshape(mu_axis.count, nu_axis.count)
        cube[~keep] = mirrored[~keep]
        slices = cube.reshape(mu_f.size, X_axis.count)
    warnings: tuple[str, ...] = ()
    if np.any(origin):
        h = X_axis.spacing
        slices[origin] = np.exp(-(X_axis.points**2) / h**2) / (np.sqrt(np.pi) * h)
        warnings += (
            "slice at (mu,nu)=(0,0) stored as nascent Gaussian of width h_X",
        )

    slices, n_fixed = _renormalize_slices(slices, X_axis)
    if n_fixed:
        warnings += (
            f"{n_fixed} parameter slices renormalized (X-window clipped "
            f"more than {SLICE_NORM_TOL:.0e} of their mass)",
        )
    values = slices.reshape(mu_axis.count, nu_axis.count, X_axis.count)
    values = np.moveaxis(values, 2, 0)
    grid = GridFn((X_axis, mu_axis, nu_axis), values, warnings)
    return Tomogram("symplectic", grid, params)


def optical_tomogram(
    W: GridFn,
    X_axis: Axis,
    theta_axis: Axis,
    params: OscillatorParams = OscillatorParams(),
    interp_order: int = 3,
) -> Tomogram:
    """Optical tomogram: the symplectic transform restricted to the homodyne
    directions (cos theta, sin theta/(m omega))."""
    if theta_axis.lo < -1e-12 or theta_axis.hi > np.pi + 1e-12:
        raise GridError("optical angle axis must stay inside [0, pi]")
    th = theta_axis.points
    mus = np.cos(th)
    nus = np.sin(th) / (params.mass * params.omega)
    slices = _radon_slices(W, X_axis, mus, nus, interp_order=interp_order)
    slices, n_fixed = _renormalize_slices(slices, X_axis)
    warnings = (
        (f"{n_fixed} angle slices renormalized after X-window clipping",)
        if n_fixed
        else ()
    )
    grid = GridFn((X_axis, theta_axis), slices.T.copy(), warnings)
    return Tomogram("optical", grid, params)


def tomogram_analytic(
    spec: StateSpec,
    representation: str,
    X_axis: Axis,
    param_axes,
    params: OscillatorParams = OscillatorParams(),
) -> Tomogram:
    """Closed-form Gaussian tomogram oracle.

    Each slice is a Gaussian in X with mean mu qbar + nu pbar and variance
    mu^2 var_q + nu^2 var_p, renormalized on the finite X window with the same
    rule as the numeric transform so the two stay comparable slice by slice.
    """
    qbar, pbar, vq, vp = _gaussian_moments(spec, params)
    X = X_axis.points
    if representation == "symplectic":
        mu_axis, nu_axis = param_axes
        mu = mu_axis.points[:, None, None]
        nu = nu_axis.points[None, :, None]
    elif representation == "optical":
        (theta_axis,) = param_axes
        th = theta_axis.points
        mu = np.cos(th)[:, None]
        nu = (np.sin(th) / (params.mass * params.omega))[:, None]
    else:
        raise GridError(f"unknown representation {representation!r}")

    var = mu**2 * vq + nu**2 * vp
    mean = mu * qbar + nu * pbar
    # the degenerate (0,0) grid point maps to the same nascent Gaussian as
    # the numeric transform (variance h_X^2 / 2); genuine narrow slices are
    # left alone
    var = np.where(var < 1e-15, X_axis.spacing**2 / 2, var)
    slices = np.exp(-((X - mean) ** 2) / (2 * var)) / np.sqrt(2 * np.pi * var)
    slices, _ = _renormalize_slices(slices, X_axis)

    if representation == "symplectic":
        values = np.moveaxis(slices, 2, 0)
        grid = GridFn((X_axis, mu_axis, nu_axis), values)
    else:
        grid = GridFn((X_axis, theta_axis), slices.T.copy())
    return Tomogram(representation, grid, params)


def wigner_from_symplectic(
    M: Tomogram,
    q_axis: Axis,
    p_axis: Axis,
    imag_tol: float = 1e-6,
    norm_tol: float = 5e-2,
) -> GridFn:
    """Reconstruct the Wigner function from a symplectic tomogram.

    Inverts the Radon family through the Fourier kernel
    W(q,p) proportional to int M(X,mu,nu) exp(i k (X - mu q - nu p)) dX dmu dnu
    with k = sqrt(m omega / hbar); the overall constant is fixed by unit total
    mass.  The triple integral factorizes into an X transform followed by two
    separable matrix products.
    """
    if M.representation != "symplectic":
        raise GridError("reconstruction requires a symplectic tomogram")
    X_axis, mu_axis, nu_axis = M.grid.axes
    k = np.sqrt(M.params.mass * M.params.omega / M.params.hbar)

    vals = M.grid.values
    span = np.max(vals, axis=0) - np.min(vals, axis=0)
    if np.max(span) < 1e-12 * max(np.max(np.abs(vals)), 1e-300):
        raise GridError("tomogram constant in X is not normalizable; cannot invert")

    # A(mu,nu) = int M(X,mu,nu) e^{ikX} dX.  Slices at large radius
    # r = |(mu,nu)| are wide in X and clipped by the window, so the integral
    # is evaluated through the homogeneity of the transform,
    # M(X, r d) = (1/r) M(X/r, d): the Fourier value at radius r along a
    # direction equals the frequency-(k r / rho0) transform of the
    # radius-rho0 slice, which the X window always captures.
    rho0 = min(1.0, 0.9 * min(abs(mu_axis.lo), mu_axis.hi, abs(nu_axis.lo), nu_axis.hi))
    mu_g, nu_g = np.meshgrid(mu_axis.points, nu_axis.points, indexing="ij")
    r = np.hypot(mu_g, nu_g)
    r_safe = np.where(r < 1e-12, 1.0, r)
    imu = (mu_g / r_safe * rho0 - mu_axis.lo) / mu_axis.spacing
    inu = (nu_g / r_safe * rho0 - nu_axis.lo) / nu_axis.spacing
    ring = np.empty((X_axis.count,) + r.shape)
    for i in range(X_axis.count):
        filt = ndimage.spline_filter(vals[i], order=3, mode="mirror")
        ring[i] = ndimage.map_coordinates(
            filt, [imu.ravel(), inu.ravel()], order=3, prefilter=False
        ).reshape(r.shape)
    freq = k * r / rho0
    phase = np.exp(1j * np.einsum("i,jk->ijk", X_axis.points, freq))
    A = np.trapezoid(ring * phase, dx=X_axis.spacing, axis=0)

    Eq = np.exp(-1j * k * np.outer(q_axis.points, mu_axis.points))  # (q, mu)
    Ep = np.exp(-1j * k * np.outer(nu_axis.points, p_axis.points))  # (nu, p)
    W = (Eq * mu_axis.spacing) @ A @ (Ep * nu_axis.spacing)  # (q, p)

    scale = max(np.max(np.abs(W.real)), 1e-300)
    if np.max(np.abs(W.imag)) > imag_tol * max(scale, 1.0):
        raise GridError(
            f"reconstruction imaginary residue {np.max(np.abs(W.imag)):.2e} "
            "exceeds tolerance; widen the parameter axes"
        )
    Wr = GridFn((q_axis, p_axis), W.real, M.grid.warnings)
    mass = integrate(Wr, (0, 1))
    # The kernel's constant prefactor is fixed by unit total mass; the raw
    # mass should still land near its theoretical value (2 pi / k)^2, and a
    # large drift signals a tomogram the parameter axes cannot represent.
    expected = (2 * np.pi / k) ** 2
    if abs(mass / expected - 1.0) > norm_tol:
        raise GridError(
            f"reconstruction mass drift {abs(mass / expected - 1.0):.2e} "
            f"exceeds {norm_tol:.0e}; input is not a valid tomogram on these axes"
        )
    return Wr.with_values(Wr.values / mass)
