#!/usr/bin/env python3
"""Render SVG figures of tomograms and joint distributions.

Produces, for a chosen state:
  * the optical tomogram w(X, theta) as a heatmap,
  * the symplectic tomogram slice M(X, mu, nu ~ 0),
  * the joint distribution slice at the same nu,
  * the Wigner function reconstructed from the symplectic tomogram.

Usage: python3 scripts/make_figures.py --state fock:n=1 --out figures/
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tomojoint import (
    DEFAULT_P1,
    DEFAULT_P2,
    DEFAULT_PARAMS,
    GaussianPrior,
    GaussianSumPrior,
    density_matrix,
    make_joint,
    optical_tomogram,
    parse_state,
    symplectic_tomogram,
    tomogram_analytic,
    wigner_from_density,
    wigner_from_symplectic,
)
from tomojoint.defaults import (
    default_mu_axis,
    default_nu_axis,
    default_p_axis,
    default_q_axis,
    default_theta_axis,
    default_x_axis,
)


def _heatmap(ax, x, y, Z, title, xlabel, ylabel):
    im = ax.pcolormesh(x, y, Z.T, shading="auto", cmap="viridis")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    plt.colorbar(im, ax=ax)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--state", default="fock:n=1", help="state spec string")
    ap.add_argument("--out", default="figures", help="output directory")
    args = ap.parse_args()

    spec = parse_state(args.state)
    params = DEFAULT_PARAMS
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    X = default_x_axis()
    MU, NU = default_mu_axis(), default_nu_axis()
    THETA = default_theta_axis()
    p1 = GaussianPrior(**DEFAULT_P1)
    p2 = GaussianSumPrior(tuple((c["q"], c["f"], c["phi"]) for c in DEFAULT_P2))

    try:
        optical = tomogram_analytic(spec, "optical", X, (THETA,), params)
        symplectic = tomogram_analytic(spec, "symplectic", X, (MU, NU), params)
    except ValueError:
        # Non-Gaussian states go through the numeric Radon transform.
        rho = density_matrix(spec, params, default_q_axis())
        W = wigner_from_density(rho, params, default_p_axis())
        optical = optical_tomogram(W, X, THETA, params)
        symplectic = symplectic_tomogram(W, X, MU, NU, params)
    joint_opt = make_joint(optical, p2)
    joint_sym = make_joint(symplectic, p1)
    wig = wigner_from_symplectic(symplectic, default_q_axis(), default_p_axis())

    inu = int(np.argmin(np.abs(NU.points - 1e-9)))
    fig, axes = plt.subplots(2, 2, figsize=(11, 9))
    _heatmap(
        axes[0, 0], X.points, THETA.points, optical.grid.values,
        f"optical tomogram  {spec}", "X", "theta",
    )
    _heatmap(
        axes[0, 1], X.points, MU.points, symplectic.grid.values[:, :, inu],
        f"symplectic tomogram (nu={NU.points[inu]:.2f})", "X", "mu",
    )
    _heatmap(
        axes[1, 0], X.points, MU.points, joint_sym.grid.values[:, :, inu],
        "joint distribution (same slice)", "X", "mu",
    )
    _heatmap(
        axes[1, 1], wig.axes[0].points, wig.axes[1].points, wig.values,
        "Wigner function (reconstructed)", "q", "p",
    )
    fig.tight_layout()
    target = out / f"overview_{args.state.replace(':', '_').replace(',', '_')}.svg"
    fig.savefig(target)
    print(f"wrote {target}")

    # Mass bookkeeping printed for quick sanity reading.
    from tomojoint import integrate

    print(f"optical joint mass:    {integrate(joint_opt.grid, (0, 1)):.6f}")
    print(f"symplectic joint mass: {integrate(joint_sym.grid, (0, 1, 2)):.6f}")


if __name__ == "__main__":
    main()
