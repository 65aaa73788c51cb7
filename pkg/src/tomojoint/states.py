"""Oscillator state catalog: wavefunctions, density matrices, Wigner functions,
and closed-form Gaussian oracles.

Pure states only.  Fock, coherent, and squeezed-Gaussian states cover every
oracle needed downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .grids import Axis, GridFn, GridError, integrate

__all__ = [
    "OscillatorParams",
    "Fock",
    "Coherent",
    "SqueezedGaussian",
    "StateSpec",
    "parse_state",
    "state_label",
    "is_gaussian",
    "wavefunction",
    "density_matrix",
    "wigner_from_density",
    "wigner_analytic",
    "state_moments",
    "wigner_moment",
    "MAX_FOCK",
]

MAX_FOCK = 12


@dataclass(frozen=True)
class OscillatorParams:
    """Mass, frequency and hbar fixing the oscillator scales."""

    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if min(self.mass, self.omega, self.hbar) <= 0:
            raise ValueError("mass, omega and hbar must be strictly positive")


@dataclass(frozen=True)
class Fock:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Fock index must be >= 0")


@dataclass(frozen=True)
class Coherent:
    alpha: complex


@dataclass(frozen=True)
class SqueezedGaussian:
    """Gaussian state with mean (qbar, pbar); ``squeeze`` scales the position
    variance to squeeze*hbar/(2 m omega) while keeping purity 1."""

    qbar: float
    pbar: float
    squeeze: float

    def __post_init__(self):
        if self.squeeze <= 0:
            raise ValueError("squeeze factor must be > 0")


StateSpec = Union[Fock, Coherent, SqueezedGaussian]


def parse_state(text: str) -> StateSpec:
    """Parse CLI state strings: ``fock:n=2``, ``coherent:re=0.5,im=0.0``,
    ``gauss:q=1,p=0,s=2``."""
    try:
        kind, _, rest = text.partition(":")
        kv = {}
        if rest:
            for item in rest.split(","):
                k, _, v = item.partition("=")
                kv[k.strip()] = float(v)
        if kind == "fock":
            return Fock(int(kv["n"]))
        if kind == "coherent":
            return Coherent(complex(kv.get("re", 0.0), kv.get("im", 0.0)))
        if kind == "gauss":
            return SqueezedGaussian(kv.get("q", 0.0), kv.get("p", 0.0), kv.get("s", 1.0))
    except (KeyError, ValueError) as exc:
        raise ValueError(f"cannot parse state spec {text!r}: {exc}") from exc
    raise ValueError(f"unknown state kind in {text!r} (expected fock/coherent/gauss)")


def state_label(spec: StateSpec) -> str:
    if isinstance(spec, Fock):
        return f"fock(n={spec.n})"
    if isinstance(spec, Coherent):
        return f"coherent({spec.alpha.real:g}{spec.alpha.imag:+g}i)"
    return f"gauss(q={spec.qbar:g},p={spec.pbar:g},s={spec.squeeze:g})"


def is_gaussian(spec: StateSpec) -> bool:
    """True for states with a Gaussian Wigner function."""
    if isinstance(spec, Fock):
        return spec.n == 0
    return True


def _gaussian_moments(spec: StateSpec, params: OscillatorParams):
    """(qbar, pbar, var_q, var_p) for Gaussian-class states."""
    m, w, hb = params.mass, params.omega, params.hbar
    if isinstance(spec, Fock) and spec.n == 0:
        return 0.0, 0.0, hb / (2 * m * w), hb * m * w / 2
    if isinstance(spec, Coherent):
        qbar = np.sqrt(2 * hb / (m * w)) * spec.alpha.real
        pbar = np.sqrt(2 * hb * m * w) * spec.alpha.imag
        return qbar, pbar, hb / (2 * m * w), hb * m * w / 2
    if isinstance(spec, SqueezedGaussian):
        s = spec.squeeze
        return spec.qbar, spec.pbar, s * hb / (2 * m * w), hb * m * w / (2 * s)
    raise ValueError(f"{state_label(spec)} is not Gaussian")


def state_moments(spec: StateSpec, params: OscillatorParams) -> dict:
    """Closed-form first/second moments and photon number.

    ``qp`` is the symmetrized moment <qp + pq>/2.
    """
    m, w, hb = params.mass, params.omega, params.hbar
    if isinstance(spec, Fock):
        vq = (spec.n + 0.5) * hb / (m * w)
        vp = (spec.n + 0.5) * hb * m * w
        return {"q": 0.0, "p": 0.0, "q2": vq, "p2": vp, "qp": 0.0, "n": float(spec.n)}
    qbar, pbar, vq, vp = _gaussian_moments(spec, params)
    q2 = qbar**2 + vq
    p2 = pbar**2 + vp
    nbar = 0.5 * (m * w / hb * q2 + p2 / (hb * m * w) - 1.0)
    return {"q": qbar, "p": pbar, "q2": q2, "p2": p2, "qp": qbar * pbar, "n": nbar}


def wavefunction(spec: StateSpec, params: OscillatorParams, q_axis: Axis) -> GridFn:
    """Position wavefunction on the grid, renormalized after tabulation."""
    m, w, hb = params.mass, params.omega, params.hbar
    q = q_axis.points
    scale = np.sqrt(m * w / hb)
    x = scale * q
    if isinstance(spec, Fock):
        if spec.n > MAX_FOCK:
            raise ValueError(
                f"Fock n={spec.n} exceeds accuracy cap {MAX_FOCK} for the "
                "Hermite recurrence on double-precision grids"
            )
        # Recurrence over L2-normalized Hermite functions.
        u_prev = np.zeros_like(x)
        u = (m * w / (np.pi * hb)) ** 0.25 * np.exp(-(x**2) / 2)
        for k in range(1, spec.n + 1):
            u, u_prev = np.sqrt(2.0 / k) * x * u - np.sqrt((k - 1) / k) * u_prev, u
        psi = u.astype(complex)
    elif isinstance(spec, Coherent):
        qbar, pbar, *_ = _gaussian_moments(spec, params)
        psi = (m * w / (np.pi * hb)) ** 0.25 * np.exp(
            -m * w * (q - qbar) ** 2 / (2 * hb) + 1j * pbar * q / hb
        )
    elif isinstance(spec, SqueezedGaussian):
        s = spec.squeeze
        psi = (m * w / (np.pi * hb * s)) ** 0.25 * np.exp(
            -m * w * (q - spec.qbar) ** 2 / (2 * hb * s) + 1j * spec.pbar * q / hb
        )
    else:
        raise TypeError(f"unknown state spec {spec!r}")
    norm = np.sqrt(np.trapezoid(np.abs(psi) ** 2, dx=q_axis.spacing))
    return GridFn((q_axis,), psi / norm)


def density_matrix(spec: StateSpec, params: OscillatorParams, q_axis: Axis) -> GridFn:
    """Pure-state density matrix rho(q, q') = psi(q) psi*(q')."""
    psi = wavefunction(spec, params, q_axis).values
    rho = np.outer(psi, psi.conj())
    return GridFn((q_axis, q_axis), rho)


def wigner_from_density(
    rho: GridFn, params: OscillatorParams, p_axis: Axis, imag_tol: float = 1e-8
) -> GridFn:
    """Wigner function from the position-representation density matrix.

    The chord integral over u uses u-steps of twice the q spacing so that
    rho(q + u/2, q - u/2) lands exactly on grid nodes (no interpolation,
    spectral-quality quadrature for smooth decaying integrands).
    """
    if rho.ndim != 2 or rho.axes[0] != rho.axes[1]:
        raise GridError("density matrix must live on a square (q, q') grid")
    q_axis = rho.axes[0]
    n = q_axis.count
    h = q_axis.spacing
    hb = params.hbar

    ks = np.arange(-(n - 1), n)  # u = 2 h k
    chords = np.zeros((n, ks.size), dtype=complex)
    for j, k in enumerate(ks):
        i = np.arange(n)
        valid = (i + k >= 0) & (i + k < n) & (i - k >= 0) & (i - k < n)
        iv = i[valid]
        chords[valid, j] = rho.values[iv + k, iv - k]

    u = 2 * h * ks
    phases = np.exp(-1j * np.outer(u, p_axis.points) / hb)
    W = (2 * h / (2 * np.pi * hb)) * chords @ phases

    scale = max(np.max(np.abs(W.real)), 1e-300)
    if np.max(np.abs(W.imag)) > imag_tol * max(scale, 1.0):
        raise GridError(
            "Wigner transform has imaginary residue "
            f"{np.max(np.abs(W.imag)):.2e}; density matrix is not Hermitian "
            "or the grids are inadequate"
        )
    return GridFn((q_axis, Axis(p_axis.lo, p_axis.hi, p_axis.count, p_axis.name or "p")), W.real)


def wigner_analytic(
    spec: StateSpec, params: OscillatorParams, q_axis: Axis, p_axis: Axis
) -> GridFn:
    """Closed-form Gaussian Wigner function; rejects non-Gaussian states."""
    qbar, pbar, vq, vp = _gaussian_moments(spec, params)
    q, p = np.meshgrid(q_axis.points, p_axis.points, indexing="ij")
    W = np.exp(-((q - qbar) ** 2) / (2 * vq) - (p - pbar) ** 2 / (2 * vp)) / (
        2 * np.pi * np.sqrt(vq * vp)
    )
    return GridFn((q_axis, p_axis), W)


def wigner_moment(W: GridFn, k: int, l: int) -> float:
    """Phase-space moment <q^k p^l> by quadrature (symmetrized operator
    ordering by construction)."""
    q, p = W.meshgrid()
    weighted = W.with_values(q**k * p**l * W.values)
    return float(integrate(weighted, (0, 1)))
