"""Uniform-grid numerical calculus: derivatives, antiderivatives, quadrature,
interpolation, and CSV/JSON serialization of tabulated functions.

All operations are pure: inputs are never mutated and results are freshly
allocated, so concurrent use is safe.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

__all__ = [
    "Axis",
    "GridFn",
    "GridError",
    "derivative",
    "inverse_derivative",
    "integrate",
    "interpolate",
    "gridfn_from_func",
    "save_gridfn",
    "load_gridfn",
    "DECAY_TOL",
]

# Relative boundary-magnitude threshold for the antiderivative decay check.
DECAY_TOL = 1e-8


class GridError(ValueError):
    """Raised for invalid grid geometry or out-of-domain requests."""


@dataclass(frozen=True)
class Axis:
    """Uniformly sampled closed interval [lo, hi] with ``count`` nodes."""

    lo: float
    hi: float
    count: int
    name: str = ""

    def __post_init__(self):
        if self.count < 3:
            raise GridError(f"axis needs at least 3 points, got {self.count}")
        if not self.hi > self.lo:
            raise GridError(f"axis requires hi > lo, got [{self.lo}, {self.hi}]")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.count - 1)

    @property
    def points(self) -> np.ndarray:
        return self.lo + self.spacing * np.arange(self.count)


@dataclass(frozen=True)
class GridFn:
    """Function tabulated on the Cartesian product of uniform axes.

    ``values.shape`` equals the tuple of axis counts.  ``warnings`` collects
    non-fatal diagnostics (e.g. decay-check violations) accumulated while the
    function was produced.
    """

    axes: tuple[Axis, ...]
    values: np.ndarray
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        shape = tuple(ax.count for ax in self.axes)
        if self.values.shape != shape:
            raise GridError(
                f"values shape {self.values.shape} does not match axes {shape}"
            )

    @property
    def scalar_kind(self) -> str:
        return "complex" if np.iscomplexobj(self.values) else "real"

    @property
    def ndim(self) -> int:
        return len(self.axes)

    def with_values(self, values: np.ndarray, extra_warnings: tuple[str, ...] = ()) -> "GridFn":
        return GridFn(self.axes, values, self.warnings + extra_warnings)

    def meshgrid(self) -> list[np.ndarray]:
        return list(np.meshgrid(*(ax.points for ax in self.axes), indexing="ij"))


def gridfn_from_func(func, axes: tuple[Axis, ...]) -> GridFn:
    """Tabulate ``func(*coordinate_arrays)`` on the product grid."""
    mesh = np.meshgrid(*(ax.points for ax in axes), indexing="ij")
    return GridFn(tuple(axes), np.asarray(func(*mesh)))


# ---------------------------------------------------------------------------
# Finite-difference machinery
# ---------------------------------------------------------------------------

def _fd_weights(offsets: np.ndarray, order: int) -> np.ndarray:
    """Stencil weights for the ``order``-th derivative at offset 0.

    Solves the Vandermonde moment conditions; offsets are in units of the grid
    spacing.
    """
    n = len(offsets)
    A = np.vander(offsets, n, increasing=True).T
    b = np.zeros(n)
    b[order] = float(math.factorial(order))
    return np.linalg.solve(A, b)


@lru_cache(maxsize=128)
def _derivative_matrix(count: int, spacing: float, order: int) -> np.ndarray:
    """Dense differentiation matrix, 4th-order interior, matching-order edges."""
    width = 5 if order == 1 else 6
    if count < width:
        raise GridError(f"axis too short for order-{order} derivative: {count} points")
    D = np.zeros((count, count))
    half = 2
    central = _fd_weights(np.arange(-half, half + 1, dtype=float), order)
    for i in range(half, count - half):
        D[i, i - half : i + half + 1] = central
    # One-sided rows of the same formal order at both edges.
    for i in range(half):
        offs = np.arange(width, dtype=float) - i
        D[i, :width] = _fd_weights(offs, order)
        offs_hi = offs - (width - 1) + 2 * i
        D[count - 1 - i, count - width :] = _fd_weights(offs_hi, order)
    return D / spacing**order


@lru_cache(maxsize=128)
def _antiderivative_matrix(count: int, spacing: float) -> np.ndarray:
    """Least-squares inverse of the first-derivative matrix, anchored at the
    lower boundary.

    Solving ``D g = f`` with the extra row ``g[0] = 0`` makes the grid
    antiderivative an exact left inverse of the derivative stencil
    (``inv(D f) = f - f[0]`` to solver precision), which the operator-algebra
    identities downstream rely on.
    """
    D = _derivative_matrix(count, spacing, 1)
    A = np.vstack([D, np.eye(count)[:1] / spacing])
    return np.linalg.pinv(A)[:, :count]


def _apply_matrix(values: np.ndarray, M: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(values, axis, 0)
    out = np.tensordot(M, moved, axes=(1, 0))
    return np.moveaxis(out, 0, axis)


def derivative(f: GridFn, axis_index: int, order: int = 1) -> GridFn:
    """Finite-difference derivative along one axis (order 1 or 2)."""
    if order not in (1, 2):
        raise GridError(f"derivative order must be 1 or 2, got {order}")
    if not 0 <= axis_index < f.ndim:
        raise GridError(f"axis index {axis_index} out of range for {f.ndim}-d grid")
    ax = f.axes[axis_index]
    D = _derivative_matrix(ax.count, ax.spacing, order)
    return f.with_values(_apply_matrix(f.values, D, axis_index))


def inverse_derivative(
    f: GridFn, axis_index: int, n: int = 1, decay_tol: float = DECAY_TOL
) -> GridFn:
    """n-fold antiderivative from the lower grid boundary (standing in for
    integration from -infinity; the integrand must decay toward that edge).

    A violated decay check attaches a warning record to the result rather
    than raising.
    """
    if not 0 <= axis_index < f.ndim:
        raise GridError(f"axis index {axis_index} out of range for {f.ndim}-d grid")
    if n < 1:
        raise GridError(f"antiderivative count must be >= 1, got {n}")
    ax = f.axes[axis_index]
    K = _antiderivative_matrix(ax.count, ax.spacing)

    extra: tuple[str, ...] = ()
    boundary = np.max(np.abs(np.take(f.values, 0, axis=axis_index)))
    scale = np.max(np.abs(f.values))
    if scale > 0 and boundary > decay_tol * scale:
        extra = (
            f"antiderivative decay check: |f| at lower boundary of axis "
            f"{axis_index} is {boundary / scale:.2e} of max |f| "
            f"(tolerance {decay_tol:.1e})",
        )

    out = f.values
    for _ in range(n):
        out = _apply_matrix(out, K, axis_index)
    return f.with_values(out, extra)


def integrate(f: GridFn, axis_indices):
    """Trapezoid quadrature over the listed axes.

    Returns a scalar when every axis is integrated out, otherwise a GridFn
    over the remaining axes.
    """
    indices = sorted(axis_indices)
    if len(set(indices)) != len(indices):
        raise GridError(f"repeated axis index in {axis_indices}")
    for i in indices:
        if not 0 <= i < f.ndim:
            raise GridError(f"axis index {i} out of range for {f.ndim}-d grid")
    out = f.values
    for i in reversed(indices):
        out = np.trapezoid(out, dx=f.axes[i].spacing, axis=i)
    if len(indices) == f.ndim:
        return complex(out) if np.iscomplexobj(f.values) else float(out)
    remaining = tuple(ax for i, ax in enumerate(f.axes) if i not in indices)
    return GridFn(remaining, out, f.warnings)


def interpolate(f: GridFn, point) -> complex | float:
    """Multilinear interpolation at one point inside the grid hull."""
    point = np.atleast_1d(np.asarray(point, dtype=float))
    if point.shape != (f.ndim,):
        raise GridError(f"point has {point.shape} coordinates, grid is {f.ndim}-d")
    idx = []
    frac = []
    for x, ax in zip(point, f.axes):
        if x < ax.lo - 1e-12 * (ax.hi - ax.lo) or x > ax.hi + 1e-12 * (ax.hi - ax.lo):
            raise GridError(f"point coordinate {x} outside axis [{ax.lo}, {ax.hi}]")
        t = (x - ax.lo) / ax.spacing
        i = min(int(np.floor(t)), ax.count - 2)
        i = max(i, 0)
        idx.append(i)
        frac.append(t - i)
    result = 0.0
    for corner in range(1 << f.ndim):
        weight = 1.0
        sel = []
        for d in range(f.ndim):
            if corner >> d & 1:
                weight *= frac[d]
                sel.append(idx[d] + 1)
            else:
                weight *= 1.0 - frac[d]
                sel.append(idx[d])
        if weight:
            result = result + weight * f.values[tuple(sel)]
    return complex(result) if np.iscomplexobj(f.values) else float(result)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def save_gridfn(f: GridFn, csv_path, header_path=None, metadata: dict | None = None):
    """Write one row per grid point (coordinates, then value columns) plus a
    JSON header describing the axes."""
    csv_path = Path(csv_path)
    header_path = Path(header_path) if header_path else csv_path.with_suffix(".json")
    names = [ax.name or f"x{i}" for i, ax in enumerate(f.axes)]
    header = {
        "axes": [
            {"name": n, "lo": ax.lo, "hi": ax.hi, "count": ax.count}
            for n, ax in zip(names, f.axes)
        ],
        "scalar_kind": f.scalar_kind,
        "warnings": list(f.warnings),
    }
    if metadata:
        header["metadata"] = metadata
    header_path.write_text(json.dumps(header, indent=2))

    mesh = np.meshgrid(*(ax.points for ax in f.axes), indexing="ij")
    coords = [m.ravel() for m in mesh]
    flat = f.values.ravel()
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if f.scalar_kind == "complex":
            writer.writerow(names + ["re", "im"])
            for row in zip(*coords, flat.real, flat.imag):
                writer.writerow([repr(float(v)) for v in row])
        else:
            writer.writerow(names + ["value"])
            for row in zip(*coords, flat):
                writer.writerow([repr(float(v)) for v in row])
    return csv_path, header_path


def load_gridfn(csv_path, header_path=None) -> GridFn:
    csv_path = Path(csv_path)
    header_path = Path(header_path) if header_path else csv_path.with_suffix(".json")
    header = json.loads(header_path.read_text())
    axes = tuple(
        Axis(a["lo"], a["hi"], a["count"], a.get("name", "")) for a in header["axes"]
    )
    shape = tuple(ax.count for ax in axes)
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1)
    data = np.atleast_2d(data)
    if header["scalar_kind"] == "complex":
        values = (data[:, -2] + 1j * data[:, -1]).reshape(shape)
    else:
        values = data[:, -1].reshape(shape)
    return GridFn(axes, values, tuple(header.get("warnings", ())))
