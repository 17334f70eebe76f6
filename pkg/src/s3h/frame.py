"""Adapted moving frames of non-conformal maps into the 3-sphere.

For a map ``f`` sampled in an adapted coordinate (``<f_1, f_1> = -1`` with
``f_1 = df/dz``) we extract ``alpha = f* f_x`` and ``beta = f* f_y``, the
function ``phi`` with ``|alpha| = 2 sinh(phi)``, the unit normal ``N`` and
``mu = <d f_1, N>``.  Every pointwise identity the frame must satisfy is
available as a residual through :func:`verify_frame`.

Frames are computed on :class:`~s3h.jet.Jet` data.  Closed-form input gives
analytic frames (exact up to rounding); sampled input goes through finite
differences first.
"""
from __future__ import annotations

import dataclasses
from functools import cached_property

import numpy as np

from . import jet as J
from .errors import ConformalPointError, NotAdaptedError, NotOnSphereError
from .grid import Grid, GridField, jet_from_samples
from .jet import Jet
from .quat import cross, embed, im, qdot, qmul, star
from .report import ResidualReport

__all__ = ["AdaptedFrameField", "build_frame", "verify_frame", "DEFAULT_ALPHA_MIN",
           "adapt_tolerance"]

DEFAULT_ALPHA_MIN = 1e-8
ANALYTIC_ADAPT_TOL = 1e-6
SPHERE_TOL = 1e-9

qm = J.lift(qmul)
crs = J.lift(cross)
dot = J.lift(qdot)


def scale(s, v):
    """Scalar field times vector field."""
    return J.bilinear(lambda a, b: a[..., None] * b, s, v)


def adapt_tolerance(grid: Grid, analytic: bool) -> float:
    return ANALYTIC_ADAPT_TOL if analytic else 10.0 * grid.h ** 2


@dataclasses.dataclass(frozen=True, eq=False)
class AdaptedFrameField:
    """Frame ``{f, f_1, f_1bar, N}`` and invariants ``alpha, beta, phi, mu`` on a grid.

    The ``*_jet`` fields carry derivative information; the plain attributes
    are their values as arrays of shape ``(ny, nx, ...)``.
    """

    grid: Grid
    f_jet: Jet
    alpha_jet: Jet
    beta_jet: Jet
    phi_jet: Jet
    N_jet: Jet
    mu_jet: Jet
    analytic: bool

    @property
    def order(self) -> int:
        return self.f_jet.order

    @cached_property
    def f(self) -> np.ndarray:
        return self.f_jet.value

    @cached_property
    def fx(self) -> np.ndarray:
        return self.f_jet.partial(1, 0)

    @cached_property
    def fy(self) -> np.ndarray:
        return self.f_jet.partial(0, 1)

    @property
    def f1(self) -> np.ndarray:
        return 0.5 * (self.fx - 1j * self.fy)

    @property
    def f1bar(self) -> np.ndarray:
        return np.conj(self.f1)

    @property
    def alpha(self) -> np.ndarray:
        return self.alpha_jet.value

    @property
    def beta(self) -> np.ndarray:
        return self.beta_jet.value

    @property
    def phi(self) -> np.ndarray:
        return self.phi_jet.value

    @property
    def N(self) -> np.ndarray:
        return self.N_jet.value

    @property
    def mu(self) -> np.ndarray:
        return self.mu_jet.value

    @cached_property
    def phi_x(self) -> np.ndarray:
        return self.phi_jet.partial(1, 0)

    @cached_property
    def phi_y(self) -> np.ndarray:
        return self.phi_jet.partial(0, 1)

    @property
    def dphi(self) -> np.ndarray:
        """Wirtinger derivative of phi."""
        return 0.5 * (self.phi_x - 1j * self.phi_y)

    def field(self, name: str) -> GridField:
        return GridField(self.grid, getattr(self, name))

    def with_mu(self, mu) -> AdaptedFrameField:
        """Copy with ``mu`` replaced (a jet, or an array/constant added as a constant jet)."""
        if not isinstance(mu, Jet):
            mu = Jet.constant(np.broadcast_to(np.asarray(mu, dtype=complex), self.grid.shape),
                              self.mu_jet.order)
        return dataclasses.replace(self, mu_jet=mu)


def build_frame(f, grid: Grid | None = None, *, alpha_min: float = DEFAULT_ALPHA_MIN,
                adapt_tol: float | None = None, sphere_tol: float = SPHERE_TOL,
                fd_order: int = 3) -> AdaptedFrameField:
    """Build the adapted frame of a map into S^3.

    Parameters
    ----------
    f : GridField or Jet
        Samples of the map (finite-difference frame) or a jet carrying
        closed-form partial derivatives (analytic frame).  A jet needs
        ``grid`` and order at least 2.
    alpha_min : float
        Points with ``|alpha| <= alpha_min`` are conformal points; the frame
        is not defined there.
    adapt_tol : float, optional
        Allowed ``|<f_1, f_1> + 1|``.  Defaults to 1e-6 for analytic input
        and ``10 h^2`` for samples, where only interior points are checked.

    Raises
    ------
    NotOnSphereError, NotAdaptedError, ConformalPointError
    """
    if isinstance(f, GridField):
        grid = f.grid
        fj = jet_from_samples(f.values, grid, order=fd_order)
        analytic = False
    elif isinstance(f, Jet):
        if grid is None:
            raise ValueError("a jet input needs its grid")
        if f.order < 2:
            raise ValueError(f"analytic frames need jets of order >= 2, got {f.order}")
        fj = f
        analytic = True
    else:
        raise TypeError("build_frame expects a GridField or a Jet")
    if adapt_tol is None:
        adapt_tol = adapt_tolerance(grid, analytic)

    fv = fj.value
    sphere_err = np.abs(np.linalg.norm(fv, axis=-1) - 1.0).max()
    if sphere_err > sphere_tol:
        raise NotOnSphereError(f"| |f| - 1 | reaches {sphere_err:.3e}")

    fx, fy = fj.dx(), fj.dy()
    fxv, fyv = fx.value, fy.value
    f1 = 0.5 * (fxv - 1j * fyv)
    adapt_dev = np.abs(qdot(f1, f1) + 1.0)
    # one-sided edge stencils are excluded for sampled input, as in every residual check
    adapt_err = (adapt_dev if analytic else adapt_dev[1:-1, 1:-1]).max()
    if adapt_err > adapt_tol:
        raise NotAdaptedError(f"|<f1, f1> + 1| reaches {adapt_err:.3e} (tolerance {adapt_tol:.1e})")

    fs = fj.linear(star)
    alpha = qm(fs, fx).linear(im)
    beta = qm(fs, fy).linear(im)
    norm_alpha = J.sqrt(dot(alpha, alpha))
    amin = float(norm_alpha.value.min())
    if not amin > alpha_min:
        raise ConformalPointError(f"|alpha| drops to {amin:.3e} (alpha_min {alpha_min:.1e})")
    phi = J.arcsinh(norm_alpha * 0.5)

    u = qm(fj, crs(alpha, beta).linear(embed))
    det = np.linalg.det(np.stack([fv, fxv, fyv, u.value], axis=-1))
    orient = np.where(det >= 0, 1.0, -1.0)
    N = scale(J.reciprocal(J.sinh(phi * 2.0)) * (0.5 * orient), u)

    d_f1 = (fx.dx() - fy.dy() - 2j * fx.dy()) * 0.25
    mu = dot(d_f1, N)
    return AdaptedFrameField(grid, fj, alpha, beta, phi, N, mu, analytic)


def _gram(vectors: dict) -> dict:
    names = list(vectors)
    out = {}
    for i, a in enumerate(names):
        for b in names[i:]:
            out[(a, b)] = qdot(vectors[a], vectors[b])
    return out


def verify_frame(frame: AdaptedFrameField, mu_zero_tol: float | None = None) -> ResidualReport:
    """Residuals of every pointwise identity of the adapted frame.

    The report contains the harmonic map equation, adaptedness, the ten Gram
    entries, the four moving-frame equations, both compatibility equations,
    the real-form equations for the derivatives of ``alpha`` and ``beta``
    and a few consistency checks.  When ``sup |mu|`` is below
    ``mu_zero_tol`` the sinh-Gordon residual is added as well.
    """
    if frame.order < 3:
        raise ValueError(f"verification needs frame jets of order >= 3, got {frame.order}")
    rep = ResidualReport(grid=frame.grid)
    fj = frame.f_jet
    f = fj.value
    fx, fy = frame.fx, frame.fy
    fxx, fxy, fyy = fj.partial(2, 0), fj.partial(1, 1), fj.partial(0, 2)
    f1 = frame.f1
    f1b = np.conj(f1)
    N = frame.N
    phi = frame.phi
    mu = frame.mu
    sh2, ch2 = np.sinh(2 * phi), np.cosh(2 * phi)
    csch2 = (1.0 / sh2)[..., None]
    coth2 = (ch2 / sh2)[..., None]
    dphi = frame.dphi

    energy = 0.25 * (qdot(fx, fx) + qdot(fy, fy))
    rep.add("harmonic", 0.25 * (fxx + fyy) + energy[..., None] * f)
    rep.add("adapted", qdot(f1, f1) + 1.0)

    expected = {
        ("f", "f"): 1.0, ("f", "f1"): 0.0, ("f", "f1bar"): 0.0, ("f", "N"): 0.0,
        ("f1", "f1"): -1.0, ("f1", "f1bar"): ch2, ("f1", "N"): 0.0,
        ("f1bar", "f1bar"): -1.0, ("f1bar", "N"): 0.0, ("N", "N"): 1.0,
    }
    gram = _gram({"f": f, "f1": f1, "f1bar": f1b, "N": N})
    for (a, b), val in gram.items():
        rep.add(f"gram_{a}_{b}", val - expected[(a, b)])

    d_f = 0.5 * (fx - 1j * fy)
    d_f1 = 0.25 * (fxx - fyy - 2j * fxy)
    d_f1b = 0.25 * (fxx + fyy)
    d_N = frame.N_jet.d().value
    rep.add("mfeq_f", d_f - f1)
    rep.add("mfeq_f1", d_f1 - (f + 2 * dphi[..., None] * (coth2 * f1 + csch2 * f1b) + mu[..., None] * N))
    rep.add("mfeq_f1bar", d_f1b + ch2[..., None] * f)
    rep.add("mfeq_N", d_N + mu[..., None] * csch2 * (csch2 * f1 + coth2 * f1b))

    pj = frame.phi_jet
    ddbar_phi = 0.25 * (pj.partial(2, 0) + pj.partial(0, 2))
    dbar_mu = frame.mu_jet.dbar().value
    rep.add("compat_phi", 2 * ddbar_phi + sh2 - np.abs(mu) ** 2 / sh2)
    rep.add("compat_mu", dbar_mu + 2 * np.conj(mu) * dphi / sh2)

    al, be = frame.alpha, frame.beta
    axb = cross(al, be)
    px = frame.phi_x[..., None]
    py = frame.phi_y[..., None]
    m1 = mu.real[..., None]
    m2 = mu.imag[..., None]
    coth = (1.0 / np.tanh(phi))[..., None]
    tanh = np.tanh(phi)[..., None]
    aj, bj = frame.alpha_jet, frame.beta_jet
    rep.add("realform_alpha_x", aj.partial(1, 0) - (px * coth * al - py * tanh * be + m1 * csch2 * axb))
    rep.add("realform_alpha_y", aj.partial(0, 1) - (py * coth * al + px * tanh * be + (1 - m2 * csch2) * axb))
    rep.add("realform_beta_x", bj.partial(1, 0) - (py * coth * al + px * tanh * be - (1 + m2 * csch2) * axb))
    rep.add("realform_beta_y", bj.partial(0, 1) - (-px * coth * al + py * tanh * be - m1 * csch2 * axb))

    mu_real = 0.25 * qdot(fxx - fyy, N) - 0.5j * qdot(fxy, N)
    rep.add("mu_realform", mu - mu_real)
    rep.add("alpha_beta", qdot(al, be))
    rep.add("beta_norm", np.linalg.norm(be, axis=-1) - 2 * np.cosh(phi))
    rep.add("normal_unit", np.linalg.norm(N, axis=-1) - 1.0)
    rep.add("normal_cross", np.linalg.norm(qmul(f, embed(axb)), axis=-1) - 2 * sh2)

    if mu_zero_tol is None:
        mu_zero_tol = 1e-10 if frame.analytic else 10 * frame.grid.h ** 2
    if np.abs(mu).max() <= mu_zero_tol:
        rep.add("sinh_gordon", 2 * ddbar_phi + sh2)

    det = np.linalg.det(np.stack([f, fx, fy, N], axis=-1))
    rep.notes["analytic"] = bool(frame.analytic)
    rep.notes["min_orientation_det"] = float(det.min())
    rep.notes["min_abs_alpha"] = float(np.linalg.norm(al, axis=-1).min())
    return rep
