"""Acceptance verification suite shared by the test suite and the ``verify``
command.

Every numbered criterion is a function producing a list of check lines; a
shared cache keeps the expensive Radon transforms (one numeric symplectic
tomogram per catalog state) to a single evaluation for the whole run.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .defaults import (
    DEFAULT_P1,
    DEFAULT_P2,
    DEFAULT_PARAMS,
    catalog_states,
    default_mu_axis,
    default_nu_axis,
    default_p_axis,
    default_q_axis,
    default_theta_axis,
    default_x_axis,
)
from .dynamics import (
    PolynomialPotential,
    _report,
    _valid_region,
    coherent_joint_trajectory,
    evolution_rhs_optical,
    evolution_rhs_symplectic,
    stability_probe,
    stationarity_condition_symplectic,
    stationary_residual_optical,
    stationary_residual_symplectic,
    step_evolution,
)
from .grids import Axis, GridFn, integrate
from .jointdist import (
    GaussianPrior,
    GaussianSumPrior,
    make_joint,
    prior_moment_integral,
    recover_conditional,
)
from .opalg import (
    AXIS_MU,
    AXIS_NU,
    AXIS_THETA,
    AXIS_X,
    Coord,
    Deriv,
    FuncFactor,
    InvDeriv,
    Product,
    Representation,
    Scalar,
    Sum,
    apply,
    conjugate_by_prior,
    ladder_operators,
    momentum_operator,
    position_operator,
)
from .states import (
    Coherent,
    Fock,
    OscillatorParams,
    SqueezedGaussian,
    density_matrix,
    is_gaussian,
    state_label,
    state_moments,
    wigner_analytic,
    wigner_from_density,
    wigner_moment,
)
from .symbols import (
    alternative_regular_symbols_q2_p2,
    monomial_regular_symbol,
    pair,
    regular_symbol,
    singular_symbol,
)
from .tomography import (
    optical_tomogram,
    symplectic_tomogram,
    tomogram_analytic,
    wigner_from_symplectic,
)

__all__ = [
    "CheckLine",
    "CriterionResult",
    "VerificationReport",
    "DEVIATION_NOTICES",
    "run_verification",
    "render_report",
    "report_to_dict",
]


DEVIATION_NOTICES = (
    "Identity-symbol normalization: the transcribed closed form divides "
    "mu0^2 by nu0^2 inside the exponential normalizer, which diverges as "
    "nu0 -> 0 and breaks <1> = 1 for off-center priors; implemented with "
    "the exponent mu0^2/xi^2 + nu0^2/zeta^2, under which the identity "
    "pairing returns 1 for every prior tested.",
    "Stationary-equation kinetic coefficients: the transcribed display "
    "carries (nu + nu0) factors where conjugating the momentum rule by the "
    "prior generates (nu - nu0); the operator is derived programmatically "
    "(both agree for nu0 = 0) and the transcribed variant stays available "
    "via printed_form=True, so the discrepancy is reported rather than "
    "silently repaired.",
    "Momentum-rule phase sign (informational): the transcribed "
    "joint-representation momentum operator shows +i(hbar/2) mu d_X while "
    "the tomographic rule it is conjugated from carries -i(hbar/2) mu d_X; "
    "the minus sign is required by [q, p] = i hbar and by the ladder "
    "operators, and is used throughout.",
)


@dataclass(frozen=True)
class CheckLine:
    """One measured quantity against its tolerance."""

    label: str
    measured: float
    tolerance: float
    comparison: str = "<="  # "<=" for error bounds, ">=" for discriminators

    @property
    def passed(self) -> bool:
        if self.comparison == "<=":
            return self.measured <= self.tolerance
        return self.measured >= self.tolerance


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    lines: tuple[CheckLine, ...]
    runtime: float

    @property
    def passed(self) -> bool:
        return all(line.passed for line in self.lines)


@dataclass(frozen=True)
class VerificationReport:
    criteria: tuple[CriterionResult, ...]
    notices: tuple[str, ...]
    runtime: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)


# ---------------------------------------------------------------------------
# Shared numeric pipeline cache
# ---------------------------------------------------------------------------

class _Cache:
    def __init__(self, params: OscillatorParams, fock0_energy: float | None = None):
        self.params = params
        # Optional injected energy for the Fock(0) stationary check; used to
        # demonstrate that the suite discriminates wrong energies.
        self.fock0_energy = fock0_energy
        self.p1 = GaussianPrior(**DEFAULT_P1)
        self.p2 = GaussianSumPrior(
            tuple((c["q"], c["f"], c["phi"]) for c in DEFAULT_P2)
        )
        self.X = default_x_axis()
        self.MU = default_mu_axis()
        self.NU = default_nu_axis()
        self.TH = default_theta_axis()
        self.Q = default_q_axis()
        self.P = default_p_axis()
        self._store: dict = {}

    def _get(self, key, builder):
        if key not in self._store:
            self._store[key] = builder()
        return self._store[key]

    def trace(self, spec) -> float:
        def build():
            rho = density_matrix(spec, self.params, self.Q)
            diag = np.real(np.diagonal(rho.values))
            return float(np.trapezoid(diag, dx=self.Q.spacing))

        return self._get(("tr", spec), build)

    def wigner(self, spec) -> GridFn:
        def build():
            rho = density_matrix(spec, self.params, self.Q)
            return wigner_from_density(rho, self.params, self.P)

        return self._get(("wig", spec), build)

    def symplectic(self, spec):
        return self._get(
            ("symp", spec),
            lambda: symplectic_tomogram(
                self.wigner(spec), self.X, self.MU, self.NU, self.params
            ),
        )

    def optical(self, spec):
        return self._get(
            ("opt", spec),
            lambda: optical_tomogram(self.wigner(spec), self.X, self.TH, self.params),
        )

    def symplectic_joint(self, spec):
        return self._get(
            ("sjoint", spec), lambda: make_joint(self.symplectic(spec), self.p1)
        )

    def optical_joint(self, spec):
        return self._get(
            ("ojoint", spec), lambda: make_joint(self.optical(spec), self.p2)
        )


def _rel(value: complex, oracle: complex) -> float:
    """Deviation relative to the oracle magnitude, floored at unit scale."""
    return abs(value - oracle) / max(abs(oracle), 1.0)


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def _c1_normalization(cache: _Cache) -> list[CheckLine]:
    lines = []
    for spec in catalog_states():
        devs = [abs(cache.trace(spec) - 1.0)]
        devs.append(abs(integrate(cache.wigner(spec), (0, 1)) - 1.0))
        M = cache.symplectic(spec)
        slice_mass = integrate(M.grid, (0,))
        devs.append(float(np.max(np.abs(slice_mass.values - 1.0))))
        w = cache.optical(spec)
        devs.append(float(np.max(np.abs(integrate(w.grid, (0,)).values - 1.0))))
        devs.append(abs(integrate(cache.symplectic_joint(spec).grid, (0, 1, 2)) - 1.0))
        devs.append(abs(integrate(cache.optical_joint(spec).grid, (0, 1)) - 1.0))
        lines.append(CheckLine(f"chain {state_label(spec)}", max(devs), 1e-3))
    return lines


def _c2_radon_oracle(cache: _Cache) -> list[CheckLine]:
    lines = []
    states = [Fock(0), Coherent(complex(1 / np.sqrt(2), 0.0)), SqueezedGaussian(0, 0, 2)]
    for spec in states:
        exact = tomogram_analytic(
            spec, "symplectic", cache.X, (cache.MU, cache.NU), cache.params
        )
        dev = float(np.max(np.abs(cache.symplectic(spec).grid.values - exact.grid.values)))
        lines.append(CheckLine(f"symplectic {state_label(spec)}", dev, 1e-3))
        exact_o = tomogram_analytic(spec, "optical", cache.X, (cache.TH,), cache.params)
        dev_o = float(np.max(np.abs(cache.optical(spec).grid.values - exact_o.grid.values)))
        lines.append(CheckLine(f"optical {state_label(spec)}", dev_o, 1e-3))
    return lines


_MOMENT_PRIORS = (
    GaussianPrior(0.0, 0.0, 1.0, 1.0),
    GaussianPrior(0.3, -0.2, 1.2, 0.8),
    GaussianPrior(1.0, 0.5, 0.7, 1.3),
    GaussianPrior(-0.5, 0.8, 1.5, 0.6),
)


def _c3_prior_moments(cache: _Cache) -> list[CheckLine]:
    lines = []
    for prior in _MOMENT_PRIORS:
        matched = 0.0
        mismatched = 0.0
        for k in range(4):
            for l in range(4):
                got = prior_moment_integral(prior, k, l)
                want = (-1.0) ** (k + l) * math.factorial(k) * math.factorial(l)
                matched = max(matched, abs(got - want))
                if k >= 1:
                    mismatched = max(
                        mismatched, abs(prior_moment_integral(prior, k, l, k - 1, l))
                    )
                if l >= 1:
                    mismatched = max(
                        mismatched, abs(prior_moment_integral(prior, k, l, k, l - 1))
                    )
        tag = f"({prior.mu0:g},{prior.nu0:g},{prior.xi:g},{prior.zeta:g})"
        lines.append(CheckLine(f"matched orders, prior {tag}", matched, 1e-6))
        lines.append(CheckLine(f"mismatched orders, prior {tag}", mismatched, 1e-8))
    return lines


def _bump_functions(axes: tuple[Axis, ...], count: int, seed: int = 7):
    """Random sums of three Gaussian bumps, broad along the frame axes
    (finite-difference truncation there scales with the fourth derivative)
    and decaying along X (anchored antiderivatives need boundary decay)."""
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


def _interior_max(values: np.ndarray) -> float:
    crop = values
    for ax in range(values.ndim):
        n = values.shape[ax]
        skip = max(1, int(round(0.1 * n)))
        crop = np.moveaxis(np.moveaxis(crop, ax, 0)[skip : n - skip], 0, ax)
    return float(np.max(np.abs(crop)))


def _c4_commutator(cache: _Cache) -> list[CheckLine]:
    rep = Representation("symplectic-joint", cache.params, cache.p1)
    low, raise_ = ladder_operators(rep)
    worst = 0.0
    axes = (cache.X, cache.MU, cache.NU)
    for f in _bump_functions(axes, 20):
        comm = apply(low, apply(raise_, f)).values - apply(raise_, apply(low, f)).values
        worst = max(worst, _interior_max(comm - f.values))
    return [CheckLine("[[a],[a+]] = id, worst of 20 test functions", worst, 1e-6)]


def _printed_operators(cache: _Cache):
    """The six displayed joint-representation operators as expression trees.

    The momentum trees use the -i(hbar/2) mu d_X phase inherited from the
    tomographic rule (see the deviation notices)."""
    p = cache.params
    m, w, hb = p.mass, p.omega, p.hbar
    pr = cache.p1
    mu_shift = FuncFactor(AXIS_MU, lambda mu: 2 * (mu - pr.mu0) / pr.xi**2, "2(mu-mu0)/xi^2")
    nu_shift = FuncFactor(AXIS_NU, lambda nu: 2 * (nu - pr.nu0) / pr.zeta**2, "2(nu-nu0)/zeta^2")

    q_printed = Sum((
        Product((Scalar(-1.0), Sum((mu_shift, Deriv(AXIS_MU))), InvDeriv(AXIS_X))),
        Product((Scalar(0.5j * hb), Coord(AXIS_NU), Deriv(AXIS_X))),
    ))
    p_printed = Sum((
        Product((Scalar(-1.0), Sum((nu_shift, Deriv(AXIS_NU))), InvDeriv(AXIS_X))),
        Product((Scalar(-0.5j * hb), Coord(AXIS_MU), Deriv(AXIS_X))),
    ))

    def ladder_printed(sign: float):
        lead = Sum((
            Product((Scalar(sign / (m * w)), Coord(AXIS_MU))),
            Product((Scalar(1j), Coord(AXIS_NU))),
        ))
        grad = Sum((
            Deriv(AXIS_MU),
            Product((Scalar(sign * 1j / (m * w)), Deriv(AXIS_NU))),
            mu_shift,
            Product((
                Scalar(sign * 1j / (m * w)),
                FuncFactor(AXIS_NU, lambda nu: 2 * (nu - pr.nu0) / pr.zeta**2, "2(nu-nu0)/zeta^2"),
            )),
        ))
        return Product((Scalar(np.sqrt(m * w / (2 * hb))), Sum((
            Product((Scalar(hb / 2), Deriv(AXIS_X), lead)),
            Product((Scalar(-1.0), InvDeriv(AXIS_X), grad)),
        ))))

    p2 = cache.p2
    comps = p2.components
    norms = p2._normalizers()

    def mixture_drift(theta):
        acc = np.zeros(np.shape(theta))
        for (q, f, phi), nk in zip(comps, norms):
            acc = acc + 2 * q * nk * (theta - f) / phi**2 * np.exp(-((theta - f) ** 2) / phi**2)
        return acc / np.maximum(p2.eval(theta), 1e-280)

    drift = Sum((FuncFactor(AXIS_THETA, mixture_drift, "2 sum Qk (th-fk)/phik^2 Pk / P"), Deriv(AXIS_THETA)))
    sin = FuncFactor(AXIS_THETA, np.sin, "sin")
    cos = FuncFactor(AXIS_THETA, np.cos, "cos")
    q_opt = Sum((
        Product((sin, InvDeriv(AXIS_X), drift)),
        Product((Coord(AXIS_X), cos)),
        Product((Scalar(0.5j * hb / (m * w)), sin, Deriv(AXIS_X))),
    ))
    p_opt = Sum((
        Product((Scalar(-m * w), cos, InvDeriv(AXIS_X), drift)),
        Product((Scalar(m * w), Coord(AXIS_X), sin)),
        Product((Scalar(-0.5j * hb), cos, Deriv(AXIS_X))),
    ))
    return q_printed, p_printed, ladder_printed(1.0), ladder_printed(-1.0), q_opt, p_opt


def _c5_conjugation(cache: _Cache) -> list[CheckLine]:
    p = cache.params
    tomo = Representation("symplectic-tomogram", p)
    otomo = Representation("optical-tomogram", p)
    programmatic = [
        conjugate_by_prior(position_operator(tomo), cache.p1),
        conjugate_by_prior(momentum_operator(tomo), cache.p1),
        conjugate_by_prior(ladder_operators(tomo)[0], cache.p1),
        conjugate_by_prior(ladder_operators(tomo)[1], cache.p1),
        conjugate_by_prior(position_operator(otomo), cache.p2),
        conjugate_by_prior(momentum_operator(otomo), cache.p2),
    ]
    printed = _printed_operators(cache)
    names = ["q joint", "p joint", "a joint", "a+ joint", "q optical joint", "p optical joint"]

    symp_axes = (cache.X, cache.MU, cache.NU)
    fns3 = list(_bump_functions(symp_axes, 3, seed=11))
    th = cache.TH
    rng = np.random.default_rng(11)
    fns2 = []
    for _ in range(3):
        Xg, tg = np.meshgrid(cache.X.points, th.points, indexing="ij")
        out = np.zeros(Xg.shape)
        for _ in range(3):
            amp = rng.uniform(0.5, 1.5)
            cx, wx = rng.uniform(-0.6, 0.6), rng.uniform(1.1, 1.5)
            ct, wt = rng.uniform(1.0, 2.0), rng.uniform(3.0, 5.0)
            out = out + amp * np.exp(-(((Xg - cx) / wx) ** 2) - ((tg - ct) / wt) ** 2)
        fns2.append(GridFn((cache.X, th), out))

    lines = []
    for name, prog, shown in zip(names, programmatic, printed):
        fns = fns2 if "optical" in name else fns3
        dev = max(
            float(np.max(np.abs(apply(prog, f).values - apply(shown, f).values)))
            for f in fns
        )
        lines.append(CheckLine(name, dev, 1e-10))
    return lines


_SYMBOL_NAMES = ("q", "p", "q2", "p2", "qp", "n")
_SINGULAR_FOR = {"one": "one", "q": "q", "p": "p", "qp": "qp", "n": "number"}


def _oracle(spec, name: str, params: OscillatorParams) -> complex:
    mom = state_moments(spec, params)
    if name == "one":
        return 1.0
    if name == "qp":
        # dual symbols give <q p> = <qp>_sym + i hbar / 2
        return mom["qp"] + 0.5j * params.hbar
    return mom[name]


def _singular_for(name: str, prior, params):
    if name == "q2":
        return singular_symbol("qn", prior, n=2, params=params)
    if name == "p2":
        return singular_symbol("pn", prior, n=2, params=params)
    return singular_symbol(_SINGULAR_FOR[name], prior, params=params)


_WIDE_X = Axis(-16.0, 16.0, 321, "X")
_WIDE_MU = Axis(-7.0, 7.0, 151, "mu")
_WIDE_NU = Axis(-7.0, 7.0, 151, "nu")
_MONOMIALS = ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (2, 2), (4, 0), (0, 4), (3, 1))


def _c6_dual_symbols(cache: _Cache) -> list[CheckLine]:
    p, pr1, pr2 = cache.params, cache.p1, cache.p2
    worst_sing = worst_reg_s = worst_reg_o = worst_cross = 0.0
    worst_alt = 0.0
    for spec in catalog_states():
        sj = cache.symplectic_joint(spec)
        oj = cache.optical_joint(spec)
        reg_vals = {}
        for name in ("one",) + _SYMBOL_NAMES:
            oracle = _oracle(spec, name, p)
            got_sing = pair(_singular_for(name, pr1, p), sj)
            worst_sing = max(worst_sing, _rel(got_sing, oracle))
            if name == "one":
                got_reg = complex(integrate(sj.grid, (0, 1, 2)))
                got_opt = complex(integrate(oj.grid, (0, 1)))
            else:
                got_reg = pair(regular_symbol(name, "symplectic", pr1, p), sj)
                got_opt = pair(regular_symbol(name, "optical", pr2, p), oj)
            reg_vals[name] = got_reg
            worst_reg_s = max(worst_reg_s, _rel(got_reg, oracle))
            worst_reg_o = max(worst_reg_o, _rel(got_opt, oracle))
            worst_cross = max(worst_cross, _rel(got_sing, got_reg))
        alt_q2, alt_p2 = alternative_regular_symbols_q2_p2(pr1, p)
        worst_alt = max(
            worst_alt,
            _rel(pair(alt_q2, sj), reg_vals["q2"]),
            _rel(pair(alt_p2, sj), reg_vals["p2"]),
        )

    worst_mono_low = worst_mono4 = 0.0
    for spec in catalog_states():
        if not is_gaussian(spec):
            continue
        exact = tomogram_analytic(
            spec, "symplectic", _WIDE_X, (_WIDE_MU, _WIDE_NU), p
        )
        joint = make_joint(exact, pr1)
        W = wigner_analytic(spec, p, _WIDE_X, Axis(-16.0, 16.0, 321, "p"))
        for k, l in _MONOMIALS:
            got = pair(monomial_regular_symbol(k, l, pr1, p), joint)
            oracle = wigner_moment(W, k, l)
            dev = _rel(got, oracle)
            if k + l >= 4:
                worst_mono4 = max(worst_mono4, dev)
            else:
                worst_mono_low = max(worst_mono_low, dev)

    return [
        CheckLine("singular symbols vs oracle, worst", worst_sing, 2e-2),
        CheckLine("regular symplectic symbols vs oracle, worst", worst_reg_s, 2e-2),
        CheckLine("regular optical symbols vs oracle, worst", worst_reg_o, 2e-2),
        CheckLine("singular vs regular cross agreement, worst", worst_cross, 2e-2),
        CheckLine("monomial symbols order <= 3 vs Wigner moments", worst_mono_low, 2e-2),
        CheckLine("monomial symbols order 4 vs Wigner moments", worst_mono4, 3e-2),
        CheckLine("alternative q2/p2 as functionals, worst", worst_alt, 2e-2),
    ]


def _c7_nonuniqueness(cache: _Cache) -> list[CheckLine]:
    p, pr1 = cache.params, cache.p1
    primary = regular_symbol("q2", "symplectic", pr1, p)
    alt_q2, _ = alternative_regular_symbols_q2_p2(pr1, p)
    joint = cache.symplectic_joint(Fock(0))
    mesh = joint.grid.meshgrid()
    pointwise = float(np.max(np.abs(primary.fn(*mesh) - alt_q2.fn(*mesh))))
    functional = max(
        _rel(pair(alt_q2, cache.symplectic_joint(spec)),
             pair(primary, cache.symplectic_joint(spec)))
        for spec in (Fock(0), Fock(2), Coherent(complex(1 / np.sqrt(2), 0)))
    )
    return [
        CheckLine("pointwise max |alt - primary| q2 symbol", pointwise, 0.1, ">="),
        CheckLine("functional agreement alt vs primary", functional, 2e-2),
    ]


def _c8_stationary(cache: _Cache) -> list[CheckLine]:
    p, pr1, pr2 = cache.params, cache.p1, cache.p2
    V = PolynomialPotential.harmonic(p)
    lines = []
    wrong_e = np.inf
    cond_eig = 0.0
    for n in range(3):
        joint = cache.symplectic_joint(Fock(n))
        energy = n + 0.5
        if n == 0 and cache.fock0_energy is not None:
            energy = cache.fock0_energy
        rep = stationary_residual_symplectic(joint, pr1, V, energy, state=f"fock{n}")
        lines.append(CheckLine(
            f"stationary residual fock(n={n}), E={energy:g}", rep.relative, 3e-2
        ))
        bad = stationary_residual_symplectic(joint, pr1, V, n + 0.7, state=f"fock{n}")
        wrong_e = min(wrong_e, bad.scaled)
        cond_eig = max(
            cond_eig, stationarity_condition_symplectic(joint, pr1, V).relative
        )
    lines.append(CheckLine("stationary discriminator, E off by 0.2, worst", wrong_e, 0.15, ">="))
    lines.append(CheckLine("stationarity condition, eigenstates, worst", cond_eig, 2e-2))
    coh = cache.symplectic_joint(Coherent(complex(1 / np.sqrt(2), 0)))
    lines.append(CheckLine(
        "stationarity condition discriminator, coherent",
        stationarity_condition_symplectic(coh, pr1, V).relative, 0.1, ">=",
    ))
    for n in range(2):
        oj = cache.optical_joint(Fock(n))
        rep = stationary_residual_optical(oj, pr2, V, n + 0.5, state=f"fock{n}")
        lines.append(CheckLine(f"optical stationary residual fock(n={n})", rep.relative, 3e-2))
    single = GaussianSumPrior(((1.0, np.pi / 3, 0.7),))
    oj = make_joint(cache.optical(Fock(0)), single)
    a = stationary_residual_optical(oj, single, V, 0.5, single_peak=True)
    b = stationary_residual_optical(oj, single, V, 0.5, single_peak=False)
    lines.append(CheckLine("single-peak vs general optical path", abs(a.relative - b.relative), 1e-8))
    return lines


_COARSE_X = Axis(-8.0, 8.0, 121, "X")
_COARSE_MU = Axis(-4.5, 4.5, 49, "mu")
_COARSE_NU = Axis(-4.5, 4.5, 49, "nu")


def _c9_evolution(cache: _Cache) -> list[CheckLine]:
    p, pr1, pr2 = cache.params, cache.p1, cache.p2
    V = PolynomialPotential.harmonic(p)
    alpha = complex(1 / np.sqrt(2), 0)
    lines = []
    dt_fd = 1e-3
    for rep_name, prior in (("symplectic", pr1), ("optical", pr2)):
        for t in (0.0, 0.3):
            jt = coherent_joint_trajectory(alpha, t, rep_name, prior, p)
            jp = coherent_joint_trajectory(alpha, t + dt_fd, rep_name, prior, p)
            jm = coherent_joint_trajectory(alpha, t - dt_fd, rep_name, prior, p)
            fd = (jp.grid.values - jm.grid.values) / (2 * dt_fd)
            if rep_name == "symplectic":
                rhs = evolution_rhs_symplectic(jt, prior, V)
            else:
                rhs = evolution_rhs_optical(jt, prior, V)
            rel = _report("evolution", "coherent", rhs.values, fd, jt).relative
            lines.append(CheckLine(f"{rep_name} RHS vs d/dt, t={t:g}", rel, 3e-2))
    j0 = cache.symplectic_joint(Fock(0))
    zero = np.zeros_like(j0.grid.values)
    rhs = evolution_rhs_symplectic(j0, pr1, V)
    lines.append(CheckLine(
        "fock(n=0) symplectic RHS == 0",
        _report("evolution", "fock0", rhs.values, zero, j0).scaled, 2e-2,
    ))
    oj0 = cache.optical_joint(Fock(0))
    orhs = evolution_rhs_optical(oj0, pr2, V)
    lines.append(CheckLine(
        "fock(n=0) optical RHS == 0",
        _report("evolution", "fock0", orhs.values, np.zeros_like(orhs.values), oj0).scaled,
        2e-2,
    ))
    start = coherent_joint_trajectory(
        alpha, 0.0, "symplectic", pr1, p,
        X_axis=_COARSE_X, param_axes=(_COARSE_MU, _COARSE_NU),
    )
    evolved = step_evolution(start, pr1, V, dt=0.01, steps=50)
    target = coherent_joint_trajectory(
        alpha, 0.5, "symplectic", pr1, p,
        X_axis=_COARSE_X, param_axes=(_COARSE_MU, _COARSE_NU),
    )
    # The stepper freezes the unresolvable origin disk; the five-point
    # stencils within two cells of its rim see held values, so the
    # comparison additionally excludes that rim (two grid spacings).
    diff = evolved.grid.values - target.grid.values
    mu, nu = _COARSE_MU.points, _COARSE_NU.points
    rim = 0.5 + 2 * max(_COARSE_MU.spacing, _COARSE_NU.spacing)
    keep = mu[:, None] ** 2 + nu[None, :] ** 2 >= rim**2
    nx, nmn = _COARSE_X.count, _COARSE_MU.count
    sx = slice(int(round(0.1 * nx)), nx - int(round(0.1 * nx)))
    sm = slice(int(round(0.1 * nmn)), nmn - int(round(0.1 * nmn)))
    din = diff[sx, sm, sm][:, keep[sm, sm]]
    tin = target.grid.values[sx, sm, sm][:, keep[sm, sm]]
    rel = float(np.sqrt(np.mean(din**2) / np.mean(tin**2)))
    lines.append(CheckLine("integrated to t=0.5 vs analytic, interior", rel, 5e-2))
    drift = abs(integrate(evolved.grid, (0, 1, 2)) - 1.0)
    lines.append(CheckLine("integration mass drift", drift, 1e-2))
    return lines


def _c10_roundtrip(cache: _Cache) -> list[CheckLine]:
    lines = []
    q_half = np.abs(cache.Q.points) <= 0.5 * cache.Q.hi
    p_half = np.abs(cache.P.points) <= 0.5 * cache.P.hi
    for spec in (Fock(0), Coherent(complex(1 / np.sqrt(2), 0)), SqueezedGaussian(0, 0, 2)):
        if isinstance(spec, SqueezedGaussian):
            # The squeezed state's characteristic function decays slowly along
            # nu; the inverse transform needs a wider frame window than the
            # default to keep truncation ringing below tolerance.
            wide_mu = Axis(-6.0, 6.0, 97, "mu")
            wide_nu = Axis(-6.0, 6.0, 97, "nu")
            tomo = symplectic_tomogram(
                cache.wigner(spec), cache.X, wide_mu, wide_nu, cache.params
            )
            joint = make_joint(tomo, cache.p1)
        else:
            joint = cache.symplectic_joint(spec)
        M = recover_conditional(joint)
        W = wigner_from_symplectic(M, cache.Q, cache.P)
        target = wigner_analytic(spec, cache.params, cache.Q, cache.P)
        dev = np.abs(W.values - target.values)[np.ix_(q_half, p_half)]
        lines.append(CheckLine(f"round trip {state_label(spec)}", float(np.max(dev)), 5e-3))
    return lines


def _c11_deviation_ledger(cache: _Cache) -> list[CheckLine]:
    have = DEVIATION_NOTICES
    return [
        CheckLine("identity-symbol exponent deviation listed", float("exponent" in have[0]), 1.0, ">="),
        CheckLine("stationary-equation sign deviation listed", float("(nu + nu0)" in have[1]), 1.0, ">="),
    ]


_CRITERIA = (
    (1, "normalization chain", _c1_normalization),
    (2, "Radon oracle", _c2_radon_oracle),
    (3, "prior-moment identity", _c3_prior_moments),
    (4, "ladder commutator", _c4_commutator),
    (5, "conjugation coherence", _c5_conjugation),
    (6, "dual-symbol oracle agreement", _c6_dual_symbols),
    (7, "symbol non-uniqueness", _c7_nonuniqueness),
    (8, "stationary states", _c8_stationary),
    (9, "evolution equations", _c9_evolution),
    (10, "reconstruction round trip", _c10_roundtrip),
    (11, "deviation ledger", _c11_deviation_ledger),
)


def run_verification(
    params: OscillatorParams = DEFAULT_PARAMS,
    only: tuple[int, ...] | None = None,
    fock0_energy: float | None = None,
) -> VerificationReport:
    """Run the acceptance criteria (all by default) and collect a report.

    ``fock0_energy`` injects a wrong ground-state energy into the stationary
    check so the discriminating power of the residual can be demonstrated.
    """
    cache = _Cache(params, fock0_energy)
    t0 = time.perf_counter()
    results = []
    for number, title, fn in _CRITERIA:
        if only is not None and number not in only:
            continue
        tc = time.perf_counter()
        lines = fn(cache)
        results.append(
            CriterionResult(number, title, tuple(lines), time.perf_counter() - tc)
        )
    return VerificationReport(
        tuple(results), DEVIATION_NOTICES, time.perf_counter() - t0
    )


def render_report(report: VerificationReport) -> str:
    out = []
    for crit in report.criteria:
        flag = "PASS" if crit.passed else "FAIL"
        out.append(f"[{flag}] criterion {crit.number}: {crit.title} ({crit.runtime:.1f}s)")
        for line in crit.lines:
            mark = "ok  " if line.passed else "FAIL"
            out.append(
                f"    {mark} {line.label}: {line.measured:.3e} {line.comparison} "
                f"{line.tolerance:.1e}"
            )
    out.append("")
    out.append("formula deviation notices:")
    for i, notice in enumerate(report.notices, 1):
        out.append(f"  ({i}) {notice}")
    out.append("")
    verdict = "PASS" if report.passed else "FAIL"
    out.append(f"overall: {verdict} ({report.runtime:.1f}s)")
    return "\n".join(out)


def report_to_dict(report: VerificationReport) -> dict:
    return {
        "passed": report.passed,
        "runtime_seconds": report.runtime,
        "notices": list(report.notices),
        "criteria": [
            {
                "number": c.number,
                "title": c.title,
                "passed": c.passed,
                "runtime_seconds": c.runtime,
                "checks": [
                    {
                        "label": line.label,
                        "measured": line.measured,
                        "tolerance": line.tolerance,
                        "comparison": line.comparison,
                        "passed": line.passed,
                    }
                    for line in c.lines
                ],
            }
            for c in report.criteria
        ],
    }
