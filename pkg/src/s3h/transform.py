"""The epsilon-transforms of non-conformal harmonic maps into S^3.

For a map ``f`` with adapted frame data ``alpha, beta, phi, mu`` and
``eps = +1`` or ``-1`` the transform is

    f^eps = 1/2 sech^2(phi) f (eps beta + 1/2 alpha x beta)
          = eps (i/2) sech^2(phi) (f_1 - f_1bar) + tanh(phi) N.

Both expressions are evaluated on every call and compared.  The transform
is again a non-conformal harmonic map, adapted in the same coordinate, and
the two signs undo each other.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple

import numpy as np

from . import jet as J
from .errors import FormulaMismatchError, TransformDegenerateError
from .frame import DEFAULT_ALPHA_MIN, AdaptedFrameField, build_frame, crs, qm, scale
from .grid import GridField
from .quat import cross, embed, qdot, qmul
from .report import ResidualReport

__all__ = [
    "Eps", "TransformCoeffs", "TransformPair", "eps_transform", "transform_coeffs",
    "transform_report", "involution_check", "sequence", "phimu_relations",
    "FORMULA_TOL",
]

FORMULA_TOL = 1e-12


class Eps(IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value) -> Eps:
        """Accept ``1, -1, '+', '-', '+1', '-1'`` or an :class:`Eps`."""
        if isinstance(value, str):
            value = {"+": 1, "-": -1, "+1": 1, "-1": -1, "1": 1}.get(value.strip(), value)
        try:
            return cls(int(value))
        except (TypeError, ValueError):
            raise ValueError(f"eps must be +1 or -1, got {value!r}") from None

    @property
    def flipped(self) -> Eps:
        return Eps(-int(self))


class TransformCoeffs(NamedTuple):
    """Closed-form ``alpha^eps``, ``beta^eps`` and ``alpha^eps x beta^eps``."""

    alpha: GridField
    beta: GridField
    cross: GridField


@dataclass(frozen=True, eq=False)
class TransformPair:
    source: AdaptedFrameField
    eps: Eps
    result: AdaptedFrameField
    coeffs: TransformCoeffs
    formula_gap: float
    unit_defect: float

    @property
    def x_source(self) -> np.ndarray:
        """``mu - 2 eps i d(phi)`` of the source frame."""
        return self.source.mu - 2j * self.eps * self.source.dphi


def _x(frame: AdaptedFrameField, eps: int) -> np.ndarray:
    return frame.mu - 2j * eps * frame.dphi


def predicted_phi(frame: AdaptedFrameField, eps: int) -> np.ndarray:
    """``phi^eps`` from ``2 sinh(phi^eps) = |mu - 2 eps i d phi| sech(phi)``."""
    return np.arcsinh(0.5 * np.abs(_x(frame, eps)) / np.cosh(frame.phi))


def _check_degenerate(frame, eps, alpha_min, step=None):
    a_e = np.abs(_x(frame, eps)) / np.cosh(frame.phi)    # = |alpha^eps| = 2 sinh(phi^eps)
    amin = float(a_e.min())
    if not amin > alpha_min:
        raise TransformDegenerateError(
            f"the {'+' if eps > 0 else '-'}transform has |alpha^eps| = {amin:.3e} <= {alpha_min:.1e}"
            " (mu is close to 2 eps i d phi)", step=step)


def _fe_def_form(frame: AdaptedFrameField, eps: int) -> np.ndarray:
    """``eps (i/2) sech^2 phi (f_1 - f_1bar) + tanh(phi) N`` with f_1 taken tangent to S^3."""
    f = frame.f
    f1 = frame.f1
    f1 = f1 - qdot(f, f1)[..., None] * f
    sech2 = 1.0 / np.cosh(frame.phi) ** 2
    out = (eps * 0.5j * sech2)[..., None] * (f1 - np.conj(f1)) + np.tanh(frame.phi)[..., None] * frame.N
    return out


def transform_coeffs(frame: AdaptedFrameField, eps) -> TransformCoeffs:
    """``alpha^eps``, ``beta^eps`` and their cross product in terms of the source frame.

    With ``A = mu_1 - eps phi_y`` and ``B = mu_2 - eps phi_x``::

        alpha^eps = B csch2phi alpha + A/2 tanh sech^2 (beta - eps/2 csch^2 alpha x beta)
        beta^eps  = A csch2phi alpha + sech^2 (1 - B/2 tanh) beta
                    + eps/2 sech^2 (1 + B csch2phi) alpha x beta
        alpha^eps x beta^eps = 2 eps csch2phi A alpha
                    - eps/2 sech^4 (A^2 + B^2 + B sinh2phi) beta
                    - 1/4 sech^4 (A^2 + B^2 - 2 B coth) alpha x beta

    Note ``A^2 + B^2 = |mu - 2 eps i d phi|^2``, which reduces to ``|mu|^2``
    only where ``d phi = 0``.
    """
    eps = int(Eps.parse(eps))
    phi = frame.phi
    al, be = frame.alpha, frame.beta
    axb = cross(al, be)
    A = (frame.mu.real - eps * frame.phi_y)[..., None]
    B = (frame.mu.imag - eps * frame.phi_x)[..., None]
    sh, ch = np.sinh(phi)[..., None], np.cosh(phi)[..., None]
    tanh = sh / ch
    sech2 = 1.0 / ch ** 2
    csch2 = 1.0 / (2 * sh * ch)
    ae = B * csch2 * al + 0.5 * A * tanh * sech2 * (be - 0.5 * eps / sh ** 2 * axb)
    bee = A * csch2 * al + sech2 * (1 - 0.5 * B * tanh) * be + 0.5 * eps * sech2 * (1 + B * csch2) * axb
    s = A * A + B * B
    ce = (2 * eps * csch2 * A * al - 0.5 * eps * sech2 ** 2 * (s + B * 2 * sh * ch) * be
          - 0.25 * sech2 ** 2 * (s - 2 * B * ch / sh) * axb)
    g = frame.grid
    return TransformCoeffs(GridField(g, ae), GridField(g, bee), GridField(g, ce))


def eps_transform(frame: AdaptedFrameField, eps, *, alpha_min: float = DEFAULT_ALPHA_MIN,
                  formula_tol: float = FORMULA_TOL, step: int | None = None) -> TransformPair:
    """Compute the eps-transform of ``frame`` and the frame of the result.

    Analytic frames give an analytic result (one jet order is used up).
    For sampled frames the transformed samples are renormalised onto S^3
    (the defect, an O(h^2) quantity, is kept in ``unit_defect``) and the
    result frame is rebuilt by finite differences.

    Raises
    ------
    TransformDegenerateError
        If ``|alpha^eps| = 2 sinh(phi^eps)`` drops to ``alpha_min`` anywhere.
    FormulaMismatchError
        If the two closed forms of ``f^eps`` disagree by more than
        ``formula_tol`` (after accounting for the tangency defect of
        sampled data, which is removed before comparison).
    """
    eps = Eps.parse(eps)
    e = int(eps)
    _check_degenerate(frame, e, alpha_min, step)

    sech2 = J.cosh(frame.phi_jet) ** -2
    vec = (frame.beta_jet * float(e) + crs(frame.alpha_jet, frame.beta_jet) * 0.5).linear(embed)
    fe_jet = scale(sech2 * 0.5, qm(frame.f_jet, vec))
    fe = fe_jet.value
    fe_def = _fe_def_form(frame, e)
    gap = float(np.abs(fe_def - fe).max())
    if gap > formula_tol:
        raise FormulaMismatchError(f"the two expressions for f^eps differ by {gap:.3e}")
    unit = float(np.abs(np.linalg.norm(fe, axis=-1) - 1.0).max())

    if frame.analytic:
        if fe_jet.order < 2:
            raise ValueError("source frame jets are too short for another analytic transform")
        result = build_frame(fe_jet, frame.grid, alpha_min=alpha_min)
    else:
        fe = fe / np.linalg.norm(fe, axis=-1, keepdims=True)
        result = build_frame(GridField(frame.grid, fe), alpha_min=alpha_min)
    return TransformPair(frame, eps, result, transform_coeffs(frame, e), gap, unit)


def transform_report(pair: TransformPair) -> ResidualReport:
    """Residuals of the identities relating a frame and its transform."""
    src, res, e = pair.source, pair.result, int(pair.eps)
    rep = ResidualReport(grid=src.grid)
    X = pair.x_source
    sech2 = 1.0 / np.cosh(src.phi) ** 2
    rep.add_scalar("formula_gap", pair.formula_gap)
    rep.add_scalar("unit_defect", pair.unit_defect)
    rep.add("result_adapted", qdot(res.f1, res.f1) + 1.0)
    rep.add("norm_f1e", qdot(res.f1, np.conj(res.f1)) - (1 + 0.5 * np.abs(X) ** 2 * sech2))
    rep.add("ip_fe_f", qdot(res.f, src.f))
    rep.add("ip_fe_f1", qdot(res.f, src.f1) + 1j * e)
    rep.add("ip_fe_f1bar", qdot(res.f, src.f1bar) - 1j * e)
    rep.add("ip_fe_N", qdot(res.f, src.N) - np.tanh(src.phi))
    rep.add("ip_f1e_f", qdot(res.f1, src.f) - 1j * e)
    rep.add("ip_f1e_f1", qdot(res.f1, src.f1) + np.tanh(src.phi) * X)
    rep.add("ip_f1e_f1bar", qdot(res.f1, src.f1bar))
    rep.add("ip_f1e_N", qdot(res.f1, src.N) - 0.5j * e * sech2 * X)
    c = pair.coeffs
    rep.add("coeff_alpha", res.alpha - c.alpha.values)
    rep.add("coeff_beta", res.beta - c.beta.values)
    rep.add("coeff_cross", cross(c.alpha.values, c.beta.values) - c.cross.values)
    rep.add("coeff_orthogonal", qdot(c.alpha.values, c.beta.values))
    rep.add("coeff_alpha_norm", np.linalg.norm(c.alpha.values, axis=-1) - 2 * np.sinh(res.phi))
    return rep


def phimu_relations(pair: TransformPair) -> ResidualReport:
    """Residuals of the relations between ``(phi, mu)`` and ``(phi^eps, mu^eps)``."""
    src, res, e = pair.source, pair.result, int(pair.eps)
    rep = ResidualReport(grid=src.grid)
    X = src.mu - 2j * e * src.dphi
    Xe = res.mu + 2j * e * res.dphi
    rep.add("phimu_sinh_e", 4 * np.sinh(res.phi) ** 2 - np.abs(X) ** 2 / np.cosh(src.phi) ** 2)
    rep.add("phimu_sinh", 4 * np.sinh(src.phi) ** 2 - np.abs(Xe) ** 2 / np.cosh(res.phi) ** 2)
    rep.add("phimu_tanh", np.tanh(res.phi) * Xe - np.tanh(src.phi) * X)
    return rep


def involution_check(frame: AdaptedFrameField, *, alpha_min: float = DEFAULT_ALPHA_MIN) -> ResidualReport:
    """``sup |(f^+)^- - f|`` and ``sup |(f^-)^+ - f|``."""
    rep = ResidualReport(grid=frame.grid)
    for e, name in ((1, "plus_minus"), (-1, "minus_plus")):
        first = eps_transform(frame, e, alpha_min=alpha_min).result
        back = eps_transform(first, -e, alpha_min=alpha_min).result
        rep.add(name, back.f - frame.f)
    return rep


def sequence(frame: AdaptedFrameField, p_min: int, p_max: int, *,
             alpha_min: float = DEFAULT_ALPHA_MIN) -> list[AdaptedFrameField]:
    """Frames ``f^p`` for ``p_min <= p <= p_max``, where ``f^(p+-1) = (f^p)^(+-)``.

    Element ``p - p_min`` of the returned list is ``f^p``.

    Raises
    ------
    TransformDegenerateError
        With ``step`` set to the index ``p`` of the map that could not be formed.
    """
    if not p_min <= 0 <= p_max:
        raise ValueError("need p_min <= 0 <= p_max")
    up = [frame]
    for p in range(1, p_max + 1):
        up.append(eps_transform(up[-1], 1, alpha_min=alpha_min, step=p).result)
    down = []
    cur = frame
    for p in range(-1, p_min - 1, -1):
        cur = eps_transform(cur, -1, alpha_min=alpha_min, step=p).result
        down.append(cur)
    return down[::-1] + up
