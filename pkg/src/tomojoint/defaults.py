"""Default grids, oscillator parameters, priors and the state catalog used by
the command line tools and the verification suite."""

from __future__ import annotations

import numpy as np

from .grids import Axis
from .states import Coherent, Fock, OscillatorParams, SqueezedGaussian, StateSpec

__all__ = [
    "DEFAULT_PARAMS",
    "default_x_axis",
    "default_mu_axis",
    "default_nu_axis",
    "default_theta_axis",
    "default_q_axis",
    "default_p_axis",
    "DEFAULT_P1",
    "DEFAULT_P2",
    "catalog_states",
]

DEFAULT_PARAMS = OscillatorParams(mass=1.0, omega=1.0, hbar=1.0)


def default_x_axis() -> Axis:
    return Axis(-8.0, 8.0, 161, "X")


def default_mu_axis() -> Axis:
    return Axis(-4.5, 4.5, 97, "mu")


def default_nu_axis() -> Axis:
    return Axis(-4.5, 4.5, 97, "nu")


def default_theta_axis() -> Axis:
    return Axis(0.0, np.pi, 181, "theta")


def default_q_axis() -> Axis:
    return Axis(-8.0, 8.0, 161, "q")


def default_p_axis() -> Axis:
    return Axis(-8.0, 8.0, 161, "p")


# Prior parameter tuples; the jointdist module turns these into prior objects
# (kept as plain data here to avoid an import cycle).
DEFAULT_P1 = {"mu0": 0.0, "nu0": 0.0, "xi": 1.0, "zeta": 1.0}
DEFAULT_P2 = [
    {"q": 0.6, "f": np.pi / 3, "phi": 0.7},
    {"q": 0.4, "f": 2 * np.pi / 3, "phi": 0.9},
]


def catalog_states() -> list[StateSpec]:
    """The standard demonstration set."""
    inv = 1 / np.sqrt(2)
    return [
        Fock(0),
        Fock(1),
        Fock(2),
        Fock(3),
        Coherent(0j),
        Coherent(complex(inv, 0.0)),
        Coherent(complex(inv, inv)),
        SqueezedGaussian(0.0, 0.0, 0.5),
        SqueezedGaussian(0.0, 0.0, 2.0),
    ]
