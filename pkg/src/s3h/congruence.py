"""Congruence of S^3-valued maps: orthogonal Procrustes fitting in O(4).

Two maps ``f`` and ``g`` sampled on the same grid are congruent when
``g = R f`` for some orthogonal ``R``.  The least-squares ``R`` comes from the
singular-value factorisation of the 4x4 cross-covariance ``sum g_i f_i^T``,
computed here with cyclic two-sided (Kogbetliantz) Jacobi rotations.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import RankDeficientWarning

__all__ = ["O4Fit", "procrustes_o4", "jacobi_svd", "sample_singular_values", "RANK_TOL"]

RANK_TOL = 1e-8
_MAX_SWEEPS = 60


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def jacobi_svd(a, tol: float = 1e-15) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular-value factorisation ``a = U diag(s) V^T`` of a small square matrix.

    Each rotation pair ``(p, q)`` is treated by first symmetrising the 2x2
    block with a left rotation and then diagonalising it with a symmetric
    Jacobi rotation applied on both sides.  Singular values are returned
    non-negative and in descending order.
    """
    b = np.array(a, dtype=float)
    n = b.shape[0]
    if b.shape != (n, n):
        raise ValueError("jacobi_svd expects a square matrix")
    u = np.eye(n)
    v = np.eye(n)
    scale = np.linalg.norm(b) or 1.0
    for _ in range(_MAX_SWEEPS):
        off = np.linalg.norm(b - np.diag(np.diag(b)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                idx = [p, q]
                (w, x), (y, z) = b[np.ix_(idx, idx)]
                if max(abs(x), abs(y)) <= tol * scale * 1e-3:
                    continue
                # left rotation making the block symmetric
                r1 = _rotation(np.arctan2(x - y, w + z))
                m = r1.T @ b[np.ix_(idx, idx)]
                # symmetric Jacobi rotation
                r2 = _rotation(0.5 * np.arctan2(-2 * m[0, 1], m[0, 0] - m[1, 1]))
                left = r1 @ r2
                b[idx, :] = left.T @ b[idx, :]
                b[:, idx] = b[:, idx] @ r2
                u[:, idx] = u[:, idx] @ left
                v[:, idx] = v[:, idx] @ r2
    s = np.diag(b).copy()
    neg = s < 0
    u[:, neg] *= -1
    s = np.abs(s)
    order = np.argsort(-s, kind="stable")
    return u[:, order], s[order], v[:, order]


def sample_singular_values(points, tol: float = 1e-15) -> np.ndarray:
    """Singular values of an ``(n, k)`` sample matrix by one-sided Jacobi rotations.

    Working on the columns directly (instead of forming ``A^T A``) keeps small
    singular values accurate, which is what a hyperplane test needs.
    """
    a = np.array(points, dtype=float).reshape(-1, np.shape(points)[-1])
    k = a.shape[1]
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for i in range(k - 1):
            for j in range(i + 1, k):
                ai, aj = a[:, i], a[:, j]
                alpha, beta, gamma = ai @ ai, aj @ aj, ai @ aj
                if abs(gamma) <= tol * np.sqrt(alpha * beta) or gamma == 0:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2 * gamma)
                t = np.sign(zeta) / (abs(zeta) + np.sqrt(1 + zeta * zeta)) if zeta != 0 else 1.0
                c = 1 / np.sqrt(1 + t * t)
                s = c * t
                a[:, i], a[:, j] = c * ai - s * aj, s * ai + c * aj
        if not rotated:
            break
    return np.sort(np.linalg.norm(a, axis=0))[::-1]


@dataclass(frozen=True)
class O4Fit:
    """Best orthogonal ``R`` with ``g ~ R f`` and the sup-norm misfit."""

    R: np.ndarray
    residual: float
    det_sign: int
    rank_deficient: bool = False
    singular_values: tuple = ()

    def to_dict(self) -> dict:
        return {"R": [float(v) for v in np.asarray(self.R).ravel()],
                "residual": float(self.residual), "det_sign": int(self.det_sign)}

    def apply(self, f) -> np.ndarray:
        return np.asarray(f) @ np.asarray(self.R).T


def _points(f) -> np.ndarray:
    vals = np.asarray(getattr(f, "values", f), dtype=float)
    if vals.shape[-1] != 4:
        raise ValueError("congruence works on R^4-valued samples")
    return vals.reshape(-1, 4)


def procrustes_o4(f, g, rank_tol: float = RANK_TOL) -> O4Fit:
    """Orthogonal ``R`` minimising ``sum |R f_i - g_i|^2`` (both orientation classes allowed).

    Emits :class:`~s3h.errors.RankDeficientWarning` when the samples of
    ``f`` or ``g`` lie in a proper linear subspace; the fit is then not
    unique but the reported residual is still the optimal one.
    """
    a, b = _points(f), _points(g)
    if a.shape != b.shape:
        raise ValueError("f and g must be sampled on the same grid")
    if a.shape[0] < 4:
        raise ValueError("need at least four sample points")
    u, s, v = jacobi_svd(b.T @ a)
    r = u @ v.T
    resid = float(np.linalg.norm(a @ r.T - b, axis=1).max())
    sf, sg = sample_singular_values(a), sample_singular_values(b)
    deficient = bool(sf[-1] <= rank_tol * sf[0] or sg[-1] <= rank_tol * sg[0])
    if deficient:
        warnings.warn("samples lie in a proper subspace of R^4; the O(4) fit is not unique",
                      RankDeficientWarning, stacklevel=2)
    det = int(np.sign(np.linalg.det(r)))
    return O4Fit(r, resid, det, deficient, tuple(float(x) for x in s))
