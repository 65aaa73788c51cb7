"""tomojoint: joint-probability representation of quantum mechanics on grids.

Tomograms of oscillator states, joint distributions with Gaussian parameter
priors, operator correspondence rules, dual symbols of observables, and
evolution / stationary-state residual checks.
"""

from .defaults import DEFAULT_P1, DEFAULT_P2, DEFAULT_PARAMS, catalog_states
from .dynamics import (
    PolynomialPotential,
    ResidualReport,
    coherent_joint_trajectory,
    evolution_rhs_optical,
    evolution_rhs_symplectic,
    stability_probe,
    stationarity_condition_symplectic,
    stationary_residual_optical,
    stationary_residual_symplectic,
    step_evolution,
)
from .grids import (
    Axis,
    GridError,
    GridFn,
    derivative,
    integrate,
    interpolate,
    inverse_derivative,
)
from .jointdist import (
    GaussianPrior,
    GaussianSumPrior,
    JointDistribution,
    make_joint,
    parse_prior,
    prior_moment_integral,
    recover_conditional,
)
from .opalg import (
    Representation,
    apply,
    conjugate_by_prior,
    ladder_operators,
    momentum_operator,
    polynomial_of_operator,
    position_operator,
)
from .states import (
    Coherent,
    Fock,
    OscillatorParams,
    SqueezedGaussian,
    density_matrix,
    parse_state,
    state_moments,
    wavefunction,
    wigner_analytic,
    wigner_from_density,
)
from .symbols import (
    alternative_regular_symbols_q2_p2,
    monomial_regular_symbol,
    pair,
    regular_symbol,
    singular_symbol,
)
from .tomography import (
    Tomogram,
    optical_tomogram,
    symplectic_tomogram,
    tomogram_analytic,
    wigner_from_symplectic,
)
from .verification import run_verification

__all__ = [
    "Axis",
    "GridError",
    "GridFn",
    "derivative",
    "inverse_derivative",
    "integrate",
    "interpolate",
    "OscillatorParams",
    "Fock",
    "Coherent",
    "SqueezedGaussian",
    "parse_state",
    "state_moments",
    "wavefunction",
    "density_matrix",
    "wigner_from_density",
    "wigner_analytic",
    "DEFAULT_PARAMS",
    "DEFAULT_P1",
    "DEFAULT_P2",
    "catalog_states",
    "Tomogram",
    "symplectic_tomogram",
    "optical_tomogram",
    "tomogram_analytic",
    "wigner_from_symplectic",
    "GaussianPrior",
    "GaussianSumPrior",
    "JointDistribution",
    "parse_prior",
    "make_joint",
    "recover_conditional",
    "prior_moment_integral",
    "Representation",
    "apply",
    "position_operator",
    "momentum_operator",
    "ladder_operators",
    "conjugate_by_prior",
    "polynomial_of_operator",
    "regular_symbol",
    "singular_symbol",
    "monomial_regular_symbol",
    "alternative_regular_symbols_q2_p2",
    "pair",
    "PolynomialPotential",
    "ResidualReport",
    "evolution_rhs_symplectic",
    "evolution_rhs_optical",
    "stationary_residual_symplectic",
    "stationarity_condition_symplectic",
    "stationary_residual_optical",
    "coherent_joint_trajectory",
    "stability_probe",
    "step_evolution",
    "run_verification",
]

__version__ = "0.1.0"
