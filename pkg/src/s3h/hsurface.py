"""Harmonic maps into S^3 and surfaces of constant mean curvature type in R^3.

For an adapted frame with ``alpha = f* f_x`` and ``beta = f* f_y`` the
frame equations contain the integrability conditions

    alpha_y - beta_x = 2 alpha x beta,        alpha_x + beta_y = 0,

so the 1-form ``beta dx - alpha dy`` is closed.  Its potential ``X``
satisfies ``X_x = beta``, ``X_y = -alpha`` and therefore

    X_xx + X_yy = -2 X_x x X_y,

the H-surface equation with ``H = -1``; ``<X_z, X_z> dz^2`` is a holomorphic
quadratic differential, equal to 1 for adapted frames.  Conversely every
such surface with ``<X_z, X_z> != 0`` gives back ``alpha = -X_y`` and
``beta = X_x`` and, after integrating ``f_x = f alpha``, ``f_y = f beta``, a
harmonic map.

The module also carries the eps-transform on the surface side, dilations
``X -> lam X`` (which send ``H`` to ``H / lam``) and the nearly Kaehler
structure ``(J, P, g)`` of ``S^3 x S^3``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import jet as J
from .bonnet import DEFAULT_SUBSTEPS, transport_map
from .errors import (ConformalInputError, NotOnManifoldError, NotTangentError,
                     TransformDegenerateError, WenteGateError, ZeroLambdaError)
from .frame import DEFAULT_ALPHA_MIN, AdaptedFrameField, build_frame, qm, scale
from .grid import Grid, GridField, diff, integrate_potential, interior_sup_norm
from .jet import Jet
from .quat import cross, embed, qdot, qmul, star
from .report import ResidualReport
from .transform import Eps

__all__ = [
    "HSurfaceField", "h_from_harmonic", "harmonic_from_h", "h_eps_transform", "dilate",
    "wente_residual", "holo_residual", "surface_report", "WENTE_H", "WENTE_LAMBDA",
    "NKPoint", "NKTangent", "nk_J", "nk_P", "nk_g", "nk_structure",
    "HoloDifferential", "holo_differential", "transport_jet",
]

#: mean-curvature constant of surfaces coming from adapted frames
HARMONIC_H = -1.0
#: dilation factor taking those surfaces to the Wente constant below
WENTE_LAMBDA = np.sqrt(3.0) / 2.0
WENTE_H = -2.0 / np.sqrt(3.0)
#: relative size of |<X_z, X_z>| below which a surface counts as conformal
CONFORMAL_TOL = 1e-4

_crs = J.lift(cross)
_dot = J.lift(lambda a, b: np.sum(a * b, axis=-1))


def _holo(xx, xy):
    """``<X_z, X_z> = (|X_x|^2 - |X_y|^2) / 4 - (i/2) <X_x, X_y>`` for arrays or jets."""
    return (_dot(xx, xx) - _dot(xy, xy)) * 0.25 - _dot(xx, xy) * 0.5j


@dataclass(frozen=True, eq=False)
class HSurfaceField:
    """Surface ``X`` in R^3 on a grid, the constant ``H`` it is meant to have and ``<X_z, X_z>``.

    ``jet`` (optional) carries exact derivatives of ``X``; without it the
    tangent vectors come from finite differences of the samples.
    """

    X: GridField
    H: float
    holo: GridField
    jet: Jet | None = None
    notes: dict = field(default_factory=dict)

    @property
    def grid(self) -> Grid:
        return self.X.grid

    @property
    def analytic(self) -> bool:
        return self.jet is not None

    def tangents(self):
        """``(X_x, X_y)`` as jets (analytic surfaces) or arrays."""
        if self.jet is not None:
            return self.jet.dx(), self.jet.dy()
        return diff(self.X.values, self.grid, 1, 0), diff(self.X.values, self.grid, 0, 1)

    @property
    def Xx(self) -> np.ndarray:
        return J.value(self.tangents()[0])

    @property
    def Xy(self) -> np.ndarray:
        return J.value(self.tangents()[1])

    @classmethod
    def from_samples(cls, X, H: float = HARMONIC_H) -> HSurfaceField:
        """Wrap sampled surface data; tangents by finite differences."""
        grid = X.grid
        xx, xy = diff(X.values, grid, 1, 0), diff(X.values, grid, 0, 1)
        return cls(X, float(H), GridField(grid, _holo(xx, xy)))

    @classmethod
    def from_jet(cls, jet: Jet, grid: Grid, H: float = HARMONIC_H, notes=None) -> HSurfaceField:
        holo = _holo(jet.dx(), jet.dy())
        return cls(GridField(grid, jet.value), float(H), GridField(grid, holo.value), jet, dict(notes or {}))


# ---------------------------------------------------------------------------
# residuals


def wente_residual(surface: HSurfaceField, H: float | None = None) -> np.ndarray:
    """Pointwise ``X_xx + X_yy - 2 H X_x x X_y`` by finite differences of the samples."""
    H = surface.H if H is None else H
    X, g = surface.X.values, surface.grid
    lap = diff(X, g, 2, 0) + diff(X, g, 0, 2)
    return lap - 2.0 * H * cross(diff(X, g, 1, 0), diff(X, g, 0, 1))


def holo_residual(surface: HSurfaceField) -> np.ndarray:
    """``d/dzbar <X_z, X_z>`` with every derivative taken by finite differences."""
    X, g = surface.X.values, surface.grid
    q = _holo(diff(X, g, 1, 0), diff(X, g, 0, 1))
    return 0.5 * (diff(q, g, 1, 0) + 1j * diff(q, g, 0, 1))


def surface_report(surface: HSurfaceField, H: float | None = None) -> ResidualReport:
    """Wente and holomorphy residuals plus the size of ``<X_z, X_z>``."""
    rep = ResidualReport(grid=surface.grid)
    rep.add("wente", wente_residual(surface, H))
    rep.add("holo_dbar", holo_residual(surface))
    xx, xy = surface.Xx, surface.Xy
    energy = 0.25 * (np.sum(xx * xx, axis=-1) + np.sum(xy * xy, axis=-1))
    rep.notes["H"] = float(surface.H if H is None else H)
    rep.notes["min_abs_holo"] = float(np.abs(surface.holo.values).min())
    rep.notes["min_rel_holo"] = float((np.abs(surface.holo.values) / energy).min())
    rep.notes.update(surface.notes)
    return rep


def _integrability(alpha, beta) -> dict:
    """Residuals of ``alpha_y - beta_x = 2 alpha x beta`` and ``alpha_x + beta_y = 0`` (jets)."""
    ab1 = alpha.dy() - beta.dx() - _crs(alpha, beta) * 2.0
    ab2 = alpha.dx() + beta.dy()
    return {"ab1": ab1.value, "ab2": ab2.value}


# ---------------------------------------------------------------------------
# the correspondence


def h_from_harmonic(frame: AdaptedFrameField, X0=None) -> HSurfaceField:
    """The surface ``X`` with ``X_x = beta``, ``X_y = -alpha`` and ``X = X0`` at the grid origin.

    Analytic frames are integrated with the Taylor-data quadrature and keep
    their derivative information; sampled frames use the trapezoid rule.
    The ``notes`` of the result record the integrability residuals and the
    path residual of the quadrature.
    """
    grid = frame.grid
    X0 = np.zeros(3) if X0 is None else np.asarray(X0, dtype=float)
    px, py = frame.beta_jet, -frame.alpha_jet
    res = _integrability(frame.alpha_jet, frame.beta_jet)
    if frame.analytic:
        pot = integrate_potential((grid, px), (grid, py), X0)
    else:
        pot = integrate_potential(GridField(grid, px.value), GridField(grid, py.value), X0)
    notes = {
        "path_residual": pot.path_residual,
        "ab1": interior_sup_norm(res["ab1"]),
        "ab2": interior_sup_norm(res["ab2"]),
    }
    if frame.analytic:
        return HSurfaceField.from_jet(Jet.from_gradient(pot.field.values, px, py), grid, HARMONIC_H, notes)
    surf = HSurfaceField.from_samples(pot.field, HARMONIC_H)
    surf.notes.update(notes)
    return surf


def transport_jet(f_values, alpha: Jet, beta: Jet) -> Jet:
    """Jet of the solution of ``f_x = f alpha``, ``f_y = f beta`` through the given values.

    Each sweep fixes one more total degree of the Taylor coefficients, so
    ``order + 1`` sweeps give the exact truncated jet.
    """
    a, b = alpha.linear(embed), beta.linear(embed)
    k = min(alpha.order, beta.order) + 1
    f = Jet.constant(np.asarray(f_values), k)
    for _ in range(k + 1):
        f = Jet.from_gradient(f_values, qm(f, a), qm(f, b))
    return f


def harmonic_from_h(surface: HSurfaceField, f0=None, *, wente_gate: float | None = None,
                    conformal_tol: float = CONFORMAL_TOL, order: str = "row",
                    substeps: int = DEFAULT_SUBSTEPS, alpha_min: float = DEFAULT_ALPHA_MIN) -> AdaptedFrameField:
    """Harmonic map with ``alpha = -X_y`` and ``beta = X_x``, started at ``f0``.

    Parameters
    ----------
    surface : HSurfaceField
        Should satisfy the H-surface equation with ``H = -1``; this is checked
        on the samples regardless of the ``H`` the field is labelled with.
    wente_gate : float, optional
        Largest allowed interior Wente residual; defaults to ``100 h^2``.
    conformal_tol : float
        Minimum of ``|<X_z, X_z>| / |X_z|^2``; below it the surface is treated
        as conformal (a CMC surface), which lies outside the correspondence.

    Raises
    ------
    ConformalInputError, WenteGateError
    """
    grid = surface.grid
    xx, xy = surface.Xx, surface.Xy
    energy = 0.25 * (np.sum(xx * xx, axis=-1) + np.sum(xy * xy, axis=-1))
    rel = float((np.abs(surface.holo.values) / np.maximum(energy, 1e-300)).min())
    if rel < conformal_tol:
        raise ConformalInputError(
            f"|<X_z, X_z>| / |X_z|^2 drops to {rel:.3e}: the surface is conformal here")
    gate = 100.0 * grid.h ** 2 if wente_gate is None else wente_gate
    w = interior_sup_norm(wente_residual(surface, HARMONIC_H))
    if w > gate:
        raise WenteGateError(f"Wente residual for H = -1 is {w:.3e} (gate {gate:.1e})")

    if surface.jet is not None:
        tx, ty = surface.tangents()
        alpha, beta = -ty, tx
        av, bv = alpha.value, beta.value
    else:
        av, bv = -xy, xx
    f = transport_map(GridField(grid, av), GridField(grid, bv), f0, order=order, substeps=substeps)
    if surface.jet is not None:
        return build_frame(transport_jet(f.values, alpha, beta), grid, alpha_min=alpha_min)
    return build_frame(f, alpha_min=alpha_min)


def h_eps_transform(surface: HSurfaceField, eps, phi=None, *,
                    alpha_min: float = DEFAULT_ALPHA_MIN) -> HSurfaceField:
    """Surface of the eps-transformed frame: ``X - sech^2(phi) (eps X_x + X_x x X_y / 2) / 2``.

    ``phi`` defaults to ``arcsinh(|X_y| / 2)``.  The result has tangents
    ``X^eps_x = beta^eps`` and ``X^eps_y = -alpha^eps`` and again ``H = -1``.

    Raises
    ------
    TransformDegenerateError
        If ``|X^eps_y| = 2 sinh(phi^eps)`` drops to ``alpha_min``.
    """
    if abs(surface.H - HARMONIC_H) > 1e-12:
        raise ValueError(f"the transform applies to H = -1 surfaces, got H = {surface.H}")
    e = float(Eps.parse(eps))
    tx, ty = surface.tangents()
    if phi is None:
        phi = J.arcsinh(J.sqrt(_dot(ty, ty)) * 0.5)
    elif isinstance(phi, GridField):
        phi = phi.values
    sech2 = J.cosh(phi) ** -2 if isinstance(phi, Jet) else 1.0 / np.cosh(phi) ** 2
    shift = scale(sech2 * 0.5, tx * e + _crs(tx, ty) * 0.5)
    grid = surface.grid
    if surface.jet is not None:
        xe = surface.jet - shift
        new_y = xe.dy().value
        out = HSurfaceField.from_jet(xe, grid, HARMONIC_H)
    else:
        out = HSurfaceField.from_samples(GridField(grid, surface.X.values - J.value(shift)), HARMONIC_H)
        new_y = out.Xy
    amin = float(np.linalg.norm(new_y, axis=-1).min())
    if not amin > alpha_min:
        raise TransformDegenerateError(f"the transformed surface has |X_y| = {amin:.3e}")
    return out


def dilate(surface: HSurfaceField, lam: float) -> HSurfaceField:
    """``X -> lam X``; the mean-curvature constant becomes ``H / lam``."""
    if lam == 0:
        raise ZeroLambdaError("dilation factor must be non-zero")
    jet = surface.jet * lam if surface.jet is not None else None
    return HSurfaceField(GridField(surface.grid, lam * surface.X.values), surface.H / lam,
                         GridField(surface.grid, lam * lam * surface.holo.values), jet, dict(surface.notes))


# ---------------------------------------------------------------------------
# nearly Kaehler S^3 x S^3


class NKPoint(NamedTuple):
    """Point ``(p, q)`` of S^3 x S^3 (arrays of unit quaternions)."""

    p: np.ndarray
    q: np.ndarray


class NKTangent(NamedTuple):
    """Tangent vector ``(U, V)`` at an :class:`NKPoint`, with ``<U, p> = <V, q> = 0``."""

    U: np.ndarray
    V: np.ndarray


def _check_point(point: NKPoint, tol: float) -> None:
    for name, a in zip("pq", point):
        err = float(np.abs(np.linalg.norm(np.asarray(a, dtype=float), axis=-1) - 1.0).max())
        if err > tol:
            raise NotOnManifoldError(f"|{name}| differs from 1 by {err:.3e}")


def _check_tangent(point: NKPoint, tangent: NKTangent, tol: float) -> None:
    for name, a, b in (("U", tangent.U, point.p), ("V", tangent.V, point.q)):
        err = float(np.abs(qdot(a, b)).max())
        if err > tol:
            raise NotTangentError(f"<{name}, base point> = {err:.3e}")


def nk_J(point: NKPoint, Z: NKTangent) -> NKTangent:
    """Almost complex structure ``((2 p q^-1 V - U), (-2 q p^-1 U + V)) / sqrt 3``."""
    p, q = point
    pq, qp = qmul(p, star(q)), qmul(q, star(p))
    s = 1.0 / np.sqrt(3.0)
    return NKTangent(s * (2 * qmul(pq, Z.V) - Z.U), s * (-2 * qmul(qp, Z.U) + Z.V))


def nk_P(point: NKPoint, Z: NKTangent) -> NKTangent:
    """Almost product structure ``(p q^-1 V, q p^-1 U)``."""
    p, q = point
    return NKTangent(qmul(qmul(p, star(q)), Z.V), qmul(qmul(q, star(p)), Z.U))


def nk_g(point: NKPoint, Z: NKTangent, W: NKTangent):
    """Nearly Kaehler metric ``(<Z, W> + <JZ, JW>) / 2`` (bilinear, also for complex vectors)."""
    jz, jw = nk_J(point, Z), nk_J(point, W)
    return 0.5 * (qdot(Z.U, W.U) + qdot(Z.V, W.V) + qdot(jz.U, jw.U) + qdot(jz.V, jw.V))


def nk_structure(point: NKPoint, tangent: NKTangent, tol: float = 1e-10
                 ) -> tuple[NKTangent, NKTangent, Callable[[NKTangent, NKTangent], np.ndarray]]:
    """``J(tangent)``, ``P(tangent)`` and the metric ``g`` at ``point``.

    Raises
    ------
    NotOnManifoldError, NotTangentError
    """
    point = NKPoint(*(np.asarray(a, dtype=float) for a in point))
    tangent = NKTangent(*(np.asarray(a) for a in tangent))
    _check_point(point, tol)
    _check_tangent(point, tangent, tol)

    def g(Z: NKTangent, W: NKTangent):
        return nk_g(point, Z, W)

    return nk_J(point, tangent), nk_P(point, tangent), g


class HoloDifferential(NamedTuple):
    """``g(P psi_z, psi_z)`` on the grid with its holomorphy residual."""

    values: GridField
    dbar_residual: float
    relation_residual: float | None = None


def holo_differential(psi: GridField, surface: HSurfaceField | None = None,
                      tol: float = 1e-9) -> HoloDifferential:
    """Quadratic differential ``g(P psi_z, psi_z)`` of a map ``psi`` into S^3 x S^3.

    ``psi`` has 8 components (``p`` then ``q``).  When a corresponding
    surface is given, ``max |g(P psi_z, psi_z) - exp(i pi/3) <X_z, X_z>|`` is
    reported as well; it is informational only.

    Raises
    ------
    NotOnManifoldError
    """
    vals = np.asarray(psi.values, dtype=float)
    if vals.shape[-1] != 8:
        raise ValueError("psi must have 8 components (two quaternions)")
    grid = psi.grid
    point = NKPoint(vals[..., :4], vals[..., 4:])
    _check_point(point, tol)
    dz = 0.5 * (diff(vals, grid, 1, 0) - 1j * diff(vals, grid, 0, 1))
    Z = NKTangent(dz[..., :4], dz[..., 4:])
    q = nk_g(point, nk_P(point, Z), Z)
    dbar = 0.5 * (diff(q, grid, 1, 0) + 1j * diff(q, grid, 0, 1))
    rel = None
    if surface is not None:
        rel = float(np.abs(q - np.exp(1j * np.pi / 3) * surface.holo.values).max())
    return HoloDifferential(GridField(grid, q), interior_sup_norm(dbar), rel)
