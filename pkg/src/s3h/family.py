"""Exact solutions: the Clifford-torus family and 1-D sinh-Gordon profiles.

Every non-conformal harmonic map with constant ``phi`` and ``mu`` is, up to
an isometry, one of the maps

    f(x, y) = (r cos(ax + by), r sin(ax + by), s cos(cx + dy), s sin(cx + dy))

with ``r^2 + s^2 = 1`` and the constants ``a, b, c, d`` fixed by ``r``,
``phi`` and an angle ``theta``.  :class:`CliffordMap` evaluates such a map
together with closed-form partial derivatives of any order.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import FormulaMismatchError, ProfileHitsZeroError, ThetaUndefinedError
from .grid import Grid, GridField
from .jet import Jet

__all__ = [
    "CliffordParams", "clifford_params", "clifford_params_from_mu", "CliffordMap",
    "clifford_map", "SinhGordonProfile", "sinh_gordon_profile", "sinh_gordon_energy",
]

_CLIP = 1e-12


def _clip_unit(t: float, what: str) -> float:
    if abs(t) > 1.0 + _CLIP:
        raise ThetaUndefinedError(f"{what} = {t:.6g} lies outside [-1, 1]")
    return float(np.clip(t, -1.0, 1.0))


@dataclass(frozen=True)
class CliffordParams:
    """Constants of one member of the Clifford-torus family."""

    r: float
    s: float
    phi: float
    theta: float
    a: float
    b: float
    c: float
    d: float
    mu: complex
    tau: float | None = None
    k: int | None = None

    def invariants(self) -> dict[str, float]:
        """Residuals of the algebraic relations every member satisfies."""
        r, s, phi = self.r, self.s, self.phi
        a, b, c, d = self.a, self.b, self.c, self.d
        return {
            "unit_radii": r * r + s * s - 1.0,
            "harmonic": np.cos(2 * self.theta) + (r * r - s * s) * np.cosh(2 * phi),
            "alpha_norm": a * a * r * r + c * c * s * s - 4 * np.sinh(phi) ** 2,
            "beta_norm": b * b * r * r + d * d * s * s - 4 * np.cosh(phi) ** 2,
            "orthogonal": a * b * r * r + c * d * s * s,
            "mu_norm": abs(self.mu) - np.sinh(2 * phi),
        }


def _params(r: float, s: float, phi: float, tau=None, k=None, root=None) -> CliffordParams:
    ch2, sh2 = np.cosh(2 * phi), np.sinh(2 * phi)
    d2 = r * r - s * s
    theta = 0.5 * np.arccos(_clip_unit(-d2 * ch2, "(s^2 - r^2) cosh 2phi"))
    a = 2 / r * np.sinh(phi) * np.cos(theta)
    b = -2 / r * np.cosh(phi) * np.sin(theta)
    c = 2 / s * np.sinh(phi) * np.sin(theta)
    d = 2 / s * np.cosh(phi) * np.cos(theta)
    if root is None:
        root = np.sqrt(max(0.0, 1.0 - (d2 * ch2) ** 2))
    mu = sh2 / (2 * r * s) * complex(d2 * sh2, -root)
    return CliffordParams(float(r), float(s), float(phi), float(theta),
                          float(a), float(b), float(c), float(d), complex(mu), tau, k)


def clifford_params(r: float, phi: float) -> CliffordParams:
    """Family member with radii ``r`` and ``s = sqrt(1 - r^2)``.

    Raises
    ------
    ThetaUndefinedError
        If ``|(s^2 - r^2) cosh 2phi| > 1``: no torus exists for this pair.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    if not phi > 0:
        raise ValueError(f"phi must be positive, got {phi}")
    return _params(r, np.sqrt(1.0 - r * r), phi)


def clifford_params_from_mu(phi: float, tau: float, tol: float = 1e-10) -> CliffordParams:
    """Family member whose ``mu`` equals ``sinh(2 phi) exp(i tau)``.

    Uses ``rho = arccot(cos(tau) csch(2 phi)) / 2 + k pi / 2`` with
    ``r = cos(rho)``, ``s = sin(rho)``, taking the smallest ``k >= 0`` that
    reproduces the requested ``mu``.  ``s`` stays positive; for
    ``sin(tau) > 0`` the match needs ``k = 1`` and hence ``r < 0``.
    """
    if not phi > 0:
        raise ValueError(f"phi must be positive, got {phi}")
    target = np.sinh(2 * phi) * np.exp(1j * tau)
    t = np.cos(tau) / np.sinh(2 * phi)
    arccot = np.pi / 2 - np.arctan(t)            # principal branch in (0, pi)
    best = None
    for k in (0, 1):
        rho = 0.5 * arccot + k * np.pi / 2
        # 1 - cos^2(2rho) cosh^2(2phi) = sin^2(2rho) sin^2(tau); the product form
        # avoids the cancellation near tau = 0, pi
        root = abs(np.sin(2 * rho) * np.sin(tau))
        p = _params(np.cos(rho), np.sin(rho), phi, tau=tau, k=k, root=root)
        err = abs(p.mu - target)
        if err < tol:
            return p
        if best is None or err < best[0]:
            best = (err, k)
    raise FormulaMismatchError(f"no branch reproduces mu (best error {best[0]:.3e} at k={best[1]})")


class CliffordMap:
    """Closed-form evaluation of a Clifford-torus map and its partials."""

    def __init__(self, params: CliffordParams):
        self.params = params

    def _angles(self, x, y):
        p = self.params
        return p.a * x + p.b * y, p.c * x + p.d * y

    def __call__(self, x, y) -> np.ndarray:
        return self.partial(x, y, 0, 0)

    def partial(self, x, y, m: int = 0, n: int = 0) -> np.ndarray:
        """``d^m_x d^n_y f`` at the points ``(x, y)``; trailing axis of length 4."""
        p = self.params
        u, v = self._angles(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        k = m + n
        # d^k/dt^k (cos t, sin t) = (cos(t + k pi/2), sin(t + k pi/2))
        sh = k * np.pi / 2
        fu = p.a ** m * p.b ** n * p.r
        fv = p.c ** m * p.d ** n * p.s
        return np.stack([fu * np.cos(u + sh), fu * np.sin(u + sh),
                         fv * np.cos(v + sh), fv * np.sin(v + sh)], axis=-1)

    def normal(self, x, y) -> np.ndarray:
        """Unit normal ``(s cos u, s sin u, -r cos v, -r sin v)``, up to orientation."""
        p = self.params
        u, v = self._angles(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return np.stack([p.s * np.cos(u), p.s * np.sin(u), -p.r * np.cos(v), -p.r * np.sin(v)], axis=-1)

    def sample(self, grid: Grid) -> GridField:
        X, Y = grid.mesh()
        return GridField(grid, self(X, Y))

    def jet(self, grid: Grid, order: int = 6) -> Jet:
        """Jet of exact partial derivatives up to total degree ``order``."""
        X, Y = grid.mesh()
        u, v = self._angles(X, Y)
        p = self.params
        coeffs = np.zeros((order + 1, order + 1) + grid.shape + (4,))
        cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
        for m in range(order + 1):
            for n in range(order + 1 - m):
                k = (m + n) % 4
                # rotate (cos, sin) by k quarter turns
                ru = [(cu, su), (-su, cu), (-cu, -su), (su, -cu)][k]
                rv = [(cv, sv), (-sv, cv), (-cv, -sv), (sv, -cv)][k]
                w = 1.0 / (factorial(m) * factorial(n))
                fu = p.a ** m * p.b ** n * p.r * w
                fv = p.c ** m * p.d ** n * p.s * w
                coeffs[m, n] = np.stack([fu * ru[0], fu * ru[1], fv * rv[0], fv * rv[1]], axis=-1)
        return Jet(coeffs, order)

    def frame(self, grid: Grid, order: int = 6):
        """Analytic :class:`~s3h.frame.AdaptedFrameField` on ``grid``."""
        from .frame import build_frame
        return build_frame(self.jet(grid, order), grid)


def clifford_map(params: CliffordParams) -> CliffordMap:
    return CliffordMap(params)


# ---------------------------------------------------------------------------
# sinh-Gordon profiles


def sinh_gordon_energy(phi, dphi):
    """First integral ``phi'^2 / 2 + cosh(2 phi)`` of ``phi'' = -2 sinh(2 phi)``."""
    return 0.5 * np.asarray(dphi) ** 2 + np.cosh(2 * np.asarray(phi))


@dataclass(frozen=True)
class SinhGordonProfile:
    """Solution of ``phi'' = -2 sinh(2 phi)`` sampled on a grid, constant in y."""

    field: GridField
    x: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    energy_drift: float

    @property
    def values(self) -> np.ndarray:
        return self.field.values


def _rhs(state):
    return np.array([state[1], -2.0 * np.sinh(2.0 * state[0])])


def _rk4(state, h):
    k1 = _rhs(state)
    k2 = _rhs(state + 0.5 * h * k1)
    k3 = _rhs(state + 0.5 * h * k2)
    k4 = _rhs(state + h * k3)
    return state + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def sinh_gordon_profile(phi0: float, dphi0: float, grid: Grid, phi_min: float = 1e-3) -> SinhGordonProfile:
    """RK4 solution of the 1-D reduction of ``2 d dbar phi = -sinh 2phi``.

    The initial values ``phi0``, ``dphi0`` are posed at the centre of the
    x-range and the ODE is integrated outwards in both directions with the
    grid step, so the profile is symmetric whenever ``dphi0 == 0``.

    Raises
    ------
    ProfileHitsZeroError
        If ``phi`` falls below ``phi_min`` inside the range.
    """
    if not phi0 > 0:
        raise ValueError("phi0 must be positive")
    x = grid.x
    h = grid.hx
    xc = 0.5 * (grid.x0 + grid.x1)
    nx = grid.nx
    states = np.empty((nx, 2))
    start = np.array([phi0, dphi0], dtype=float)
    if nx % 2 == 1:
        mid = nx // 2
        states[mid] = start
        right_first, left_first = mid + 1, mid - 1
        r_state = l_state = start
    else:
        right_first, left_first = nx // 2, nx // 2 - 1
        r_state = _rk4(start, h / 2)
        l_state = _rk4(start, -h / 2)
        states[right_first] = r_state
        states[left_first] = l_state
        right_first += 1
        left_first -= 1
    for i in range(right_first, nx):
        r_state = _rk4(r_state, h)
        states[i] = r_state
    for i in range(left_first, -1, -1):
        l_state = _rk4(l_state, -h)
        states[i] = l_state
    phi, dphi = states[:, 0], states[:, 1]
    low = np.flatnonzero(phi < phi_min)
    if low.size:
        raise ProfileHitsZeroError(
            f"phi drops below {phi_min:g} at x = {x[low[0]]:.6g} (centre {xc:.6g}); shrink the x-range")
    energy = sinh_gordon_energy(phi, dphi)
    drift = float(np.abs(energy - sinh_gordon_energy(phi0, dphi0)).max())
    values = np.broadcast_to(phi, grid.shape).copy()
    return SinhGordonProfile(GridField(grid, values), x, phi, dphi, drift)
