"""Uniform parameter grids, sampled fields and finite-difference operators.

Arrays sampled on a :class:`Grid` have shape ``(ny, nx, ...)``: axis 0 runs
over ``y`` and axis 1 over ``x``, so a C-order flatten is the row-major
(``j`` outer, ``i`` inner) order used by the CSV format.

All derivatives are second order: central differences in the interior and
one-sided second-order stencils on the edges.  The edge stencils are chosen
so that their error expansion agrees with the central one through ``h^4``
(see :func:`_matched_edge_weights`).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import NamedTuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import GridTooSmallError
from .jet import Jet

__all__ = [
    "Grid", "GridField", "ddx", "ddy", "diff", "d_wirtinger", "dbar_wirtinger",
    "integrate_potential", "Potential", "sup_norm", "interior_sup_norm",
    "jet_from_samples",
]


@dataclass(frozen=True)
class Grid:
    x0: float
    y0: float
    hx: float
    hy: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.hx > 0 and self.hy > 0):
            raise ValueError("grid steps must be positive")
        if self.nx < 3 or self.ny < 3:
            raise GridTooSmallError(f"grid needs at least 3x3 points, got {self.nx}x{self.ny}")

    @classmethod
    def from_bounds(cls, x0, x1, y0, y1, nx, ny) -> Grid:
        nx, ny = int(nx), int(ny)
        if nx < 3 or ny < 3:
            raise GridTooSmallError(f"grid needs at least 3x3 points, got {nx}x{ny}")
        return cls(float(x0), float(y0), (x1 - x0) / (nx - 1), (y1 - y0) / (ny - 1), nx, ny)

    @property
    def x1(self) -> float:
        return self.x0 + (self.nx - 1) * self.hx

    @property
    def y1(self) -> float:
        return self.y0 + (self.ny - 1) * self.hy

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.hx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.y0 + self.hy * np.arange(self.ny)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def h(self) -> float:
        return max(self.hx, self.hy)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y)

    def refined(self) -> Grid:
        """Same rectangle with both steps halved."""
        return Grid(self.x0, self.y0, self.hx / 2, self.hy / 2, 2 * self.nx - 1, 2 * self.ny - 1)


@dataclass(frozen=True)
class GridField:
    """Values of shape ``(ny, nx, ...)`` sampled on ``grid``."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape[:2] != self.grid.shape:
            raise ValueError(f"values of shape {values.shape} do not fit a {self.grid.shape} grid")
        object.__setattr__(self, "values", values)

    @property
    def value_shape(self) -> tuple:
        return self.values.shape[2:]

    def dx(self) -> GridField:
        return GridField(self.grid, ddx(self.values, self.grid))

    def dy(self) -> GridField:
        return GridField(self.grid, ddy(self.values, self.grid))

    def d(self) -> GridField:
        return d_wirtinger(self)

    def dbar(self) -> GridField:
        return dbar_wirtinger(self)

    def __sub__(self, other: GridField) -> GridField:
        return GridField(self.grid, self.values - np.asarray(getattr(other, "values", other)))

    def __add__(self, other: GridField) -> GridField:
        return GridField(self.grid, self.values + np.asarray(getattr(other, "values", other)))


def _check(values, grid: Grid):
    if grid.nx < 3 or grid.ny < 3:
        raise GridTooSmallError("central differences need at least 3 points per axis")
    if np.shape(values)[:2] != grid.shape:
        raise ValueError("array does not match grid")


def _solve_exact(rows, rhs):
    """Gauss-Jordan elimination over the rationals (tiny systems only)."""
    n = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        a[col] = [v / a[col][col] for v in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                a[i] = [vi - a[i][col] * vc for vi, vc in zip(a[i], a[col])]
    return [row[-1] for row in a]


def _matched_edge_weights(deriv: int) -> np.ndarray:
    """One-sided weights on points 0, 1, ... whose error expansion equals the central stencil's.

    The central first difference is ``f' + h^2 f^(3) / 6 + h^4 f^(5) / 120 + ...``
    and the central second difference ``f'' + h^2 f^(4) / 12 + h^4 f^(6) / 360``.
    Matching these terms (not just cancelling them) keeps the discretisation
    error a smooth function up to the grid edge, so fields derived from
    sampled derivatives can themselves be differentiated at O(h^2).
    """
    target = {1: {1: Fraction(1), 3: Fraction(1, 6), 5: Fraction(1, 120)},
              2: {2: Fraction(1), 4: Fraction(1, 12), 6: Fraction(1, 360)}}[deriv]
    npts = 6 if deriv == 1 else 7
    rows = [[Fraction(k) ** j / factorial(j) for k in range(npts)] for j in range(npts)]
    rhs = [target.get(j, Fraction(0)) for j in range(npts)]
    return np.array([float(w) for w in _solve_exact(rows, rhs)])


_EDGE1 = _matched_edge_weights(1)
_EDGE2 = _matched_edge_weights(2)


def _edges(out, v, w, scale):
    k = len(w)
    out[0] = np.tensordot(w, v[:k], axes=(0, 0)) / scale
    out[-1] = np.tensordot(w, v[::-1][:k], axes=(0, 0)) / scale


def _first(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    v = np.moveaxis(np.asarray(values), axis, 0)
    if v.shape[0] < len(_EDGE1):
        return np.gradient(values, h, axis=axis, edge_order=2)
    out = np.empty(v.shape, dtype=np.result_type(v, float))
    out[1:-1] = (v[2:] - v[:-2]) / (2 * h)
    _edges(out, v, _EDGE1, h)
    out[-1] = -out[-1]
    return np.moveaxis(out, 0, axis)


def _second(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    v = np.moveaxis(np.asarray(values), axis, 0)
    out = np.empty(v.shape, dtype=np.result_type(v, float))
    out[1:-1] = (v[2:] - 2 * v[1:-1] + v[:-2]) / h ** 2
    if v.shape[0] >= len(_EDGE2):
        _edges(out, v, _EDGE2, h ** 2)
    elif v.shape[0] >= 4:
        out[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / h ** 2
        out[-1] = (2 * v[-1] - 5 * v[-2] + 4 * v[-3] - v[-4]) / h ** 2
    else:
        out[0] = out[1]
        out[-1] = out[1]
    return np.moveaxis(out, 0, axis)


def diff(values, grid: Grid, m: int = 1, n: int = 0) -> np.ndarray:
    """Approximate ``d^m_x d^n_y`` of sampled values.

    Pure second derivatives use the compact three-point stencil; higher
    orders compose first and second differences.
    """
    _check(values, grid)
    out = np.asarray(values)
    for axis, k, h in ((1, m, grid.hx), (0, n, grid.hy)):
        while k >= 2:
            out = _second(out, h, axis)
            k -= 2
        if k == 1:
            out = _first(out, h, axis)
    return out


def ddx(values, grid: Grid) -> np.ndarray:
    return diff(values, grid, 1, 0)


def ddy(values, grid: Grid) -> np.ndarray:
    return diff(values, grid, 0, 1)


def d_wirtinger(field: GridField) -> GridField:
    """d/dz = (d/dx - i d/dy) / 2 by second-order differences."""
    g = field.grid
    return GridField(g, 0.5 * (ddx(field.values, g) - 1j * ddy(field.values, g)))


def dbar_wirtinger(field: GridField) -> GridField:
    """d/dzbar = (d/dx + i d/dy) / 2 by second-order differences."""
    g = field.grid
    return GridField(g, 0.5 * (ddx(field.values, g) + 1j * ddy(field.values, g)))


def jet_from_samples(values, grid: Grid, order: int = 3) -> Jet:
    """Jet whose partial derivatives are finite differences of ``values``."""
    partials = {}
    for m in range(order + 1):
        for n in range(order + 1 - m):
            partials[(m, n)] = diff(values, grid, m, n)
    return Jet.from_partials(partials, order)


def _pointwise(values) -> np.ndarray:
    a = np.abs(np.asarray(values))
    if a.ndim > 2:
        a = np.sqrt(np.sum(a.reshape(a.shape[:2] + (-1,)) ** 2, axis=-1))
    return a


def sup_norm(field) -> float:
    """Largest pointwise norm over all grid points."""
    return float(_pointwise(getattr(field, "values", field)).max())


def interior_sup_norm(field) -> float:
    """Largest pointwise norm over points not on the grid edge."""
    a = _pointwise(getattr(field, "values", field))[1:-1, 1:-1]
    return float(a.max()) if a.size else 0.0


class Potential(NamedTuple):
    field: GridField
    path_residual: float


def _segment_integrals(jet: Jet, h: float, axis: int) -> np.ndarray:
    """Integrals over consecutive cells along ``axis`` from Taylor data at both ends.

    Averages the forward expansion from the left node with the backward
    expansion from the right node; with ``order == 0`` this is the trapezoid
    rule.
    """
    left = 0.0
    right = 0.0
    for k in range(jet.order + 1):
        c = jet.coeffs[k, 0] if axis == 1 else jet.coeffs[0, k]
        w = h ** (k + 1) / (k + 1)
        sl_l = [slice(None)] * c.ndim
        sl_r = [slice(None)] * c.ndim
        sl_l[axis] = slice(None, -1)
        sl_r[axis] = slice(1, None)
        left = left + c[tuple(sl_l)] * w
        right = right + c[tuple(sl_r)] * (w * (-1) ** k)
    return 0.5 * (left + right)


def _cumulative(p, h: float, axis: int) -> np.ndarray:
    if isinstance(p, Jet):
        seg = _segment_integrals(p, h, axis)
        zero_shape = list(seg.shape)
        zero_shape[axis] = 1
        return np.concatenate([np.zeros(zero_shape, dtype=seg.dtype), np.cumsum(seg, axis=axis)], axis=axis)
    return cumulative_trapezoid(p, dx=h, axis=axis, initial=0)


def integrate_potential(px, py, v0=0.0) -> Potential:
    """Integrate ``dF = px dx + py dy`` with ``F`` equal to ``v0`` at the grid origin.

    The canonical path runs along the first row and then up every column.
    The result is compared against the column-first path; the sup of the
    difference is returned as ``path_residual`` and measures how far the
    data are from being a gradient.

    ``px`` and ``py`` are :class:`GridField` samples (trapezoid rule) or
    jets paired with a grid as ``(grid, jet)``, in which case the Taylor
    data give a high-order quadrature.
    """
    if isinstance(px, tuple):
        grid, px = px
        _, py = py
    else:
        grid = px.grid
        px, py = px.values, py.values
    hx, hy = grid.hx, grid.hy
    ix = _cumulative(px, hx, axis=1)
    iy = _cumulative(py, hy, axis=0)
    v0 = np.asarray(v0)
    # row first: along y = y0, then up each column
    row_first = v0 + ix[:1] + (iy - iy[:1])
    # column first: along x = x0, then along each row
    col_first = v0 + iy[:, :1] + (ix - ix[:, :1])
    res = _pointwise(row_first - col_first).max()
    return Potential(GridField(grid, row_first), float(res))
