"""Reconstruction of a harmonic map from its invariants ``phi`` and ``mu``.

Given ``phi > 0`` and ``mu`` satisfying the compatibility equations, the
first-order system

    f_x = f alpha,    f_y = f beta,
    alpha_x = phi_x coth(phi) alpha - phi_y tanh(phi) beta + mu_1 csch(2phi) alpha x beta
    alpha_y = phi_y coth(phi) alpha + phi_x tanh(phi) beta + (1 - mu_2 csch(2phi)) alpha x beta
    beta_x  = phi_y coth(phi) alpha + phi_x tanh(phi) beta - (1 + mu_2 csch(2phi)) alpha x beta
    beta_y  = -phi_x coth(phi) alpha + phi_y tanh(phi) beta - mu_1 csch(2phi) alpha x beta

is integrated with classical RK4 (a fixed number of steps per grid cell)
from a seed at the grid origin, first along the bottom row and then up
every column.  Any two admissible seeds give maps
that differ by an element of O(4).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CompatGateError, RenormalizationOverflowError, SeedInvalidError
from .frame import DEFAULT_ALPHA_MIN, AdaptedFrameField, build_frame
from .grid import Grid, GridField, diff
from .quat import cross, embed, qmul

__all__ = [
    "BonnetData", "Seed", "BonnetResult", "reconstruct", "integrate_frame",
    "path_independence_check", "transport_map", "DEFAULT_COMPAT_GATE", "DRIFT_LIMIT",
]

DEFAULT_COMPAT_GATE = 1e-4
DRIFT_LIMIT = 1e-3
ORTHO_DRIFT = 1e-10
DEFAULT_SUBSTEPS = 4


@dataclass(frozen=True, eq=False)
class BonnetData:
    """Invariants ``phi``, ``mu`` on a grid, with derivatives of ``phi`` and the compatibility residuals.

    Use :meth:`from_fields`; ``phi_x``/``phi_y`` default to finite
    differences of ``phi`` but may be supplied exactly (e.g. from an ODE
    solution).
    """

    phi: GridField
    mu: GridField
    phi_x: np.ndarray
    phi_y: np.ndarray
    compat_residual: dict = field(default_factory=dict)

    @property
    def grid(self) -> Grid:
        return self.phi.grid

    @classmethod
    def from_fields(cls, phi, mu, phi_x=None, phi_y=None) -> BonnetData:
        g = phi.grid
        p = np.asarray(phi.values, dtype=float)
        if not np.all(p > 0):
            raise ValueError("phi must be positive everywhere")
        m = np.broadcast_to(np.asarray(getattr(mu, "values", mu), dtype=complex), g.shape).copy()
        px = diff(p, g, 1, 0) if phi_x is None else np.broadcast_to(phi_x, g.shape).astype(float)
        py = diff(p, g, 0, 1) if phi_y is None else np.broadcast_to(phi_y, g.shape).astype(float)
        sh2 = np.sinh(2 * p)
        lap = diff(p, g, 2, 0) + diff(p, g, 0, 2)
        dphi = 0.5 * (px - 1j * py)
        dbar_mu = 0.5 * (diff(m, g, 1, 0) + 1j * diff(m, g, 0, 1))
        r_phi = 0.5 * lap + sh2 - np.abs(m) ** 2 / sh2
        r_mu = dbar_mu + 2 * np.conj(m) * dphi / sh2
        compat = {
            "compat_phi": float(np.abs(r_phi[1:-1, 1:-1]).max()),
            "compat_mu": float(np.abs(r_mu[1:-1, 1:-1]).max()),
        }
        return cls(GridField(g, p), GridField(g, m), px, py, compat)

    @classmethod
    def constant(cls, grid: Grid, phi: float, mu: complex) -> BonnetData:
        return cls.from_fields(GridField(grid, np.full(grid.shape, float(phi))),
                               np.full(grid.shape, complex(mu)),
                               phi_x=np.zeros(grid.shape), phi_y=np.zeros(grid.shape))

    @property
    def compat_sup(self) -> float:
        return max(self.compat_residual.values()) if self.compat_residual else 0.0

    def coefficients(self) -> np.ndarray:
        """Stack ``(phi, phi_x, phi_y, mu_1, mu_2)`` on a trailing axis."""
        m = self.mu.values
        return np.stack([self.phi.values, self.phi_x, self.phi_y, m.real, m.imag], axis=-1)


@dataclass(frozen=True)
class Seed:
    """Initial values of ``f``, ``alpha``, ``beta`` at the grid origin."""

    f: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    @classmethod
    def default(cls, phi0: float) -> Seed:
        """``f = 1``, ``alpha = 2 sinh(phi0) e1``, ``beta = 2 cosh(phi0) e2``."""
        return cls(np.array([1.0, 0.0, 0.0, 0.0]),
                   np.array([2 * np.sinh(phi0), 0.0, 0.0]),
                   np.array([0.0, 2 * np.cosh(phi0), 0.0]))

    def validate(self, phi0: float, tol: float = 1e-9) -> None:
        f, a, b = (np.asarray(v, dtype=float) for v in (self.f, self.alpha, self.beta))
        if f.shape != (4,) or a.shape != (3,) or b.shape != (3,):
            raise SeedInvalidError("seed needs f in R^4 and alpha, beta in R^3")
        checks = {
            "|f| - 1": np.linalg.norm(f) - 1,
            "|alpha| - 2 sinh(phi)": (np.linalg.norm(a) - 2 * np.sinh(phi0)) / max(1.0, np.sinh(phi0)),
            "|beta| - 2 cosh(phi)": (np.linalg.norm(b) - 2 * np.cosh(phi0)) / np.cosh(phi0),
            "<alpha, beta>": a @ b / np.cosh(phi0) ** 2,
        }
        bad = {k: v for k, v in checks.items() if abs(v) > tol}
        if bad:
            raise SeedInvalidError("seed violates " + ", ".join(f"{k} = {v:.3e}" for k, v in bad.items()))


# ---------------------------------------------------------------------------
# generic path integration


def _lagrange4(pos: float) -> np.ndarray:
    """Cubic Lagrange weights on nodes 0, 1, 2, 3 evaluated at ``pos``."""
    w = np.ones(4)
    for k in range(4):
        for m in range(4):
            if m != k:
                w[k] *= (pos - m) / (k - m)
    return w


def _cell_values(c: np.ndarray, axis: int, fractions) -> np.ndarray:
    """Values of ``c`` at ``i + t`` for each cell ``[i, i+1]`` along ``axis`` and each ``t`` in ``fractions``.

    Cubic interpolation through the four nodes around the cell, shifted
    inwards for the two end cells; at ``t = 1/2`` the interior weights are
    ``(-1, 9, 9, -1)/16`` and the end weights ``(5, 15, -5, 1)/16``.  The
    result has a leading axis over ``fractions`` and the cell index in place
    of ``axis``.
    """
    c = np.moveaxis(np.asarray(c), axis, 0)
    n = c.shape[0]
    out = np.empty((len(fractions), n - 1) + c.shape[1:], dtype=c.dtype)
    for k, t in enumerate(fractions):
        if n < 4:
            out[k] = (1 - t) * c[:-1] + t * c[1:]
            continue
        out[k, 0] = np.tensordot(_lagrange4(t), c[:4], axes=(0, 0))
        w = _lagrange4(1 + t)
        out[k, 1:n - 2] = w[0] * c[:n - 3] + w[1] * c[1:n - 2] + w[2] * c[2:n - 1] + w[3] * c[3:]
        out[k, n - 2] = np.tensordot(_lagrange4(2 + t), c[n - 4:], axes=(0, 0))
    return np.moveaxis(out, 1, axis + 1)


def _rk4(state, h, rhs, c0, cm, c1):
    k1 = rhs(state, c0)
    k2 = rhs(state + 0.5 * h * k1, cm)
    k3 = rhs(state + 0.5 * h * k2, cm)
    k4 = rhs(state + h * k3, c1)
    return state + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass
class _Monitor:
    drift: float = 0.0

    def project_f(self, f):
        n = np.linalg.norm(f, axis=-1, keepdims=True)
        d = float(np.abs(n - 1).max())
        self.drift = max(self.drift, d)
        if d > DRIFT_LIMIT:
            raise RenormalizationOverflowError(
                f"|f| drifted to {1 + d:.6f} within one step (limit 1 +- {DRIFT_LIMIT:g}); reduce the grid step")
        return f / n


def _path_integrate(state0, coeffs, grid: Grid, rhs_x, rhs_y, project, order: str, substeps: int = 1):
    """Integrate along the first row then up the columns (``order='row'``) or the transpose.

    Each grid cell is covered by ``substeps`` RK4 steps; the coefficients at
    the RK4 stages come from cubic interpolation of the nodal values.
    """
    ny, nx = grid.shape
    fr = np.arange(2 * substeps + 1) / (2 * substeps)
    cx = _cell_values(coeffs, 1, fr)          # (2S+1, ny, nx-1, k)
    cy = _cell_values(coeffs, 0, fr)          # (2S+1, ny-1, nx, k)
    hx, hy = grid.hx / substeps, grid.hy / substeps

    def cell(s, h, rhs, cv):
        for q in range(substeps):
            s = project(_rk4(s, h, rhs, cv[2 * q], cv[2 * q + 1], cv[2 * q + 2]), cv[2 * q + 2])
        return s

    out = np.empty(grid.shape + state0.shape, dtype=float)
    out[0, 0] = state0
    if order == "row":
        s = state0
        for i in range(nx - 1):
            s = out[0, i + 1] = cell(s, hx, rhs_x, cx[:, 0, i])
        s = out[0]
        for j in range(ny - 1):
            s = out[j + 1] = cell(s, hy, rhs_y, cy[:, j])
    elif order == "column":
        s = state0
        for j in range(ny - 1):
            s = out[j + 1, 0] = cell(s, hy, rhs_y, cy[:, j, 0])
        s = out[:, 0]
        for i in range(nx - 1):
            s = out[:, i + 1] = cell(s, hx, rhs_x, cx[:, :, i])
    else:
        raise ValueError("order must be 'row' or 'column'")
    return out


# ---------------------------------------------------------------------------
# the frame system


def _split(state):
    return state[..., :4], state[..., 4:7], state[..., 7:10]


def _terms(c):
    phi, px, py, m1, m2 = (c[..., k:k + 1] for k in range(5))
    coth = 1.0 / np.tanh(phi)
    tanh = np.tanh(phi)
    csch2 = 1.0 / np.sinh(2 * phi)
    return px, py, m1, m2, coth, tanh, csch2


def _rhs_x(state, c):
    f, a, b = _split(state)
    px, py, m1, m2, coth, tanh, csch2 = _terms(c)
    axb = cross(a, b)
    da = px * coth * a - py * tanh * b + m1 * csch2 * axb
    db = py * coth * a + px * tanh * b - (1 + m2 * csch2) * axb
    return np.concatenate([qmul(f, embed(a)), da, db], axis=-1)


def _rhs_y(state, c):
    f, a, b = _split(state)
    px, py, m1, m2, coth, tanh, csch2 = _terms(c)
    axb = cross(a, b)
    da = py * coth * a + px * tanh * b + (1 - m2 * csch2) * axb
    db = -px * coth * a + py * tanh * b - m1 * csch2 * axb
    return np.concatenate([qmul(f, embed(b)), da, db], axis=-1)


def _frame_projector(monitor: _Monitor):
    def project(state, c):
        f, a, b = _split(state)
        f = monitor.project_f(f)
        ab = np.sum(a * b, axis=-1, keepdims=True)
        if np.abs(ab).max() > ORTHO_DRIFT:
            a, b = (a - 0.5 * ab * b / np.sum(b * b, axis=-1, keepdims=True),
                    b - 0.5 * ab * a / np.sum(a * a, axis=-1, keepdims=True))
        phi = c[..., :1]
        a = a * (2 * np.sinh(phi) / np.linalg.norm(a, axis=-1, keepdims=True))
        b = b * (2 * np.cosh(phi) / np.linalg.norm(b, axis=-1, keepdims=True))
        return np.concatenate([f, a, b], axis=-1)
    return project


@dataclass(frozen=True, eq=False)
class BonnetResult:
    f: GridField
    alpha: np.ndarray
    beta: np.ndarray
    max_drift: float
    order: str


def reconstruct(data: BonnetData, seed: Seed | None = None, *, order: str = "row",
                compat_gate: float = DEFAULT_COMPAT_GATE, substeps: int = DEFAULT_SUBSTEPS) -> BonnetResult:
    """Integrate the frame system; returns the sampled map and transported ``alpha``, ``beta``.

    Raises
    ------
    CompatGateError
        If a compatibility residual of ``data`` exceeds ``compat_gate``.
    SeedInvalidError, RenormalizationOverflowError
    """
    bad = {k: v for k, v in data.compat_residual.items() if v > compat_gate}
    if bad:
        raise CompatGateError("compatibility residual above gate "
                              f"{compat_gate:g}: " + ", ".join(f"{k} = {v:.3e}" for k, v in bad.items()))
    phi0 = float(data.phi.values[0, 0])
    seed = Seed.default(phi0) if seed is None else seed
    seed.validate(phi0)
    state0 = np.concatenate([np.asarray(seed.f, float), np.asarray(seed.alpha, float), np.asarray(seed.beta, float)])
    mon = _Monitor()
    out = _path_integrate(state0, data.coefficients(), data.grid, _rhs_x, _rhs_y, _frame_projector(mon), order, substeps)
    f, a, b = _split(out)
    return BonnetResult(GridField(data.grid, f), a, b, mon.drift, order)


def integrate_frame(data: BonnetData, seed: Seed | None = None, *, compat_gate: float = DEFAULT_COMPAT_GATE,
                    alpha_min: float = DEFAULT_ALPHA_MIN, substeps: int = DEFAULT_SUBSTEPS) -> AdaptedFrameField:
    """Reconstruct the harmonic map with invariants ``(phi, mu)`` and return its frame.

    The frame is measured from the reconstructed samples by finite
    differences, so comparing its ``phi`` and ``mu`` with the input is a
    genuine check of the reconstruction.
    """
    res = reconstruct(data, seed, compat_gate=compat_gate, substeps=substeps)
    return build_frame(res.f, alpha_min=alpha_min)


def path_independence_check(data: BonnetData, seed: Seed | None = None, *,
                            compat_gate: float = DEFAULT_COMPAT_GATE, substeps: int = DEFAULT_SUBSTEPS) -> float:
    """Sup-norm difference of the row-first and column-first reconstructions of ``f``."""
    a = reconstruct(data, seed, order="row", compat_gate=compat_gate, substeps=substeps)
    b = reconstruct(data, seed, order="column", compat_gate=compat_gate, substeps=substeps)
    return float(np.linalg.norm(a.f.values - b.f.values, axis=-1).max())


# ---------------------------------------------------------------------------
# transport of f alone, for prescribed alpha and beta


def transport_map(alpha: GridField, beta, f0=None, *, order: str = "row",
                  substeps: int = DEFAULT_SUBSTEPS) -> GridField:
    """Solve ``f_x = f alpha``, ``f_y = f beta`` for given fields, starting from ``f0``.

    Only integrable data (``alpha_y - beta_x = 2 alpha x beta`` together
    with ``alpha_x + beta_y = 0`` up to discretisation) give a
    path-independent result.
    """
    grid = alpha.grid
    f0 = np.array([1.0, 0.0, 0.0, 0.0]) if f0 is None else np.asarray(f0, dtype=float)
    coeffs = np.concatenate([alpha.values, np.asarray(getattr(beta, "values", beta))], axis=-1)
    mon = _Monitor()

    def rhs_x(f, c):
        return qmul(f, embed(c[..., :3]))

    def rhs_y(f, c):
        return qmul(f, embed(c[..., 3:]))

    out = _path_integrate(f0, coeffs, grid, rhs_x, rhs_y, lambda f, c: mon.project_f(f), order, substeps)
    return GridField(grid, out)
