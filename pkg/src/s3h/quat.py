"""Quaternion and complexified-quaternion algebra.

Quaternions are stored as arrays whose last axis holds the components
``(w, x, y, z)`` along ``1, e1, e2, e3``.  Imaginary quaternions use a
last axis of length 3.  A complexified quaternion ``p + i q`` (where ``i``
commutes with everything and is distinct from ``e1``) is stored as a
complex array, so every product below is automatically complex-bilinear.

The small value classes :class:`Quaternion`, :class:`ImQuaternion` and
:class:`CQuaternion` wrap single elements for scalar work; the array
functions are what the grid code uses.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "qmul", "star", "bar", "qdot", "cdot", "cross", "ccross", "im", "embed",
    "qnorm", "improd_split", "Quaternion", "ImQuaternion", "CQuaternion",
]


def qmul(p, q):
    """Quaternion product of arrays with trailing axis 4 (real or complex)."""
    p = np.asarray(p)
    q = np.asarray(q)
    pw, px, py, pz = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    qw, qx, qy, qz = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack([
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    ], axis=-1)


def star(p):
    """Conjugation with respect to e1, e2, e3."""
    p = np.asarray(p)
    return np.concatenate([p[..., :1], -p[..., 1:]], axis=-1)


def bar(u):
    """Conjugation with respect to the commuting imaginary unit ``i``."""
    return np.conj(u)


def qdot(p, q):
    """Euclidean inner product, extended complex-bilinearly (not Hermitian)."""
    return np.sum(np.asarray(p) * np.asarray(q), axis=-1)


cdot = qdot


def cross(a, b):
    """Vector product on the last axis (length 3); bilinear for complex input."""
    a = np.asarray(a)
    b = np.asarray(b)
    return np.stack([
        a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1],
        a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2],
        a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0],
    ], axis=-1)


ccross = cross


def im(p):
    """Imaginary part of a quaternion array, as a trailing-axis-3 array."""
    return np.asarray(p)[..., 1:]


def embed(a):
    """Imaginary 3-vectors as quaternions with zero real part."""
    a = np.asarray(a)
    return np.concatenate([np.zeros_like(a[..., :1]), a], axis=-1)


def qnorm(p):
    return np.sqrt(np.sum(np.abs(np.asarray(p)) ** 2, axis=-1))


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, a) -> Quaternion:
        w, x, y, z = (float(c) for c in np.asarray(a, dtype=float))
        return cls(w, x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion.from_array(self.to_array() + other.to_array())

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion.from_array(self.to_array() - other.to_array())

    def __neg__(self) -> Quaternion:
        return Quaternion.from_array(-self.to_array())

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.to_array(), other.to_array()))
        return Quaternion.from_array(self.to_array() * float(other))

    __rmul__ = __mul__

    def star(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))

    def dot(self, other: Quaternion) -> float:
        return float(qdot(self.to_array(), other.to_array()))

    def imag(self) -> ImQuaternion:
        """Drop the real part.  Raises if it is not (numerically) zero."""
        if abs(self.w) > 1e-12 * max(1.0, self.norm()):
            raise ValueError(f"quaternion has real part {self.w!r}")
        return ImQuaternion(self.x, self.y, self.z)


@dataclass(frozen=True)
class ImQuaternion:
    """Imaginary quaternion, identified with a vector in R^3."""

    x: float
    y: float
    z: float

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def to_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    def __add__(self, other: ImQuaternion) -> ImQuaternion:
        return ImQuaternion(*(self.to_array() + other.to_array()))

    def __sub__(self, other: ImQuaternion) -> ImQuaternion:
        return ImQuaternion(*(self.to_array() - other.to_array()))

    def __mul__(self, other):
        if isinstance(other, ImQuaternion):
            return self.to_quaternion() * other.to_quaternion()
        return ImQuaternion(*(self.to_array() * float(other)))

    __rmul__ = __mul__

    def dot(self, other: ImQuaternion) -> float:
        return float(self.to_array() @ other.to_array())

    def cross(self, other: ImQuaternion) -> ImQuaternion:
        return ImQuaternion(*cross(self.to_array(), other.to_array()))


def improd_split(alpha: ImQuaternion, beta: ImQuaternion) -> tuple[float, ImQuaternion]:
    """Split the product of two imaginary quaternions.

    Returns ``(-<alpha, beta>, alpha x beta)``, the real and imaginary
    parts of ``alpha * beta``.
    """
    return -alpha.dot(beta), alpha.cross(beta)


@dataclass(frozen=True)
class CQuaternion:
    """Element ``re + i im`` of the complexified quaternions."""

    re: Quaternion
    im: Quaternion

    @classmethod
    def from_array(cls, a) -> CQuaternion:
        a = np.asarray(a, dtype=complex)
        return cls(Quaternion.from_array(a.real), Quaternion.from_array(a.imag))

    def to_array(self) -> np.ndarray:
        return self.re.to_array() + 1j * self.im.to_array()

    def __add__(self, other: CQuaternion) -> CQuaternion:
        return CQuaternion.from_array(self.to_array() + other.to_array())

    def __sub__(self, other: CQuaternion) -> CQuaternion:
        return CQuaternion.from_array(self.to_array() - other.to_array())

    def __mul__(self, other):
        if isinstance(other, CQuaternion):
            return CQuaternion.from_array(qmul(self.to_array(), other.to_array()))
        return CQuaternion.from_array(self.to_array() * complex(other))

    __rmul__ = __mul__

    def bar(self) -> CQuaternion:
        return CQuaternion(self.re, -self.im)

    def star(self) -> CQuaternion:
        return CQuaternion(self.re.star(), self.im.star())

    def dot(self, other: CQuaternion) -> complex:
        return complex(cdot(self.to_array(), other.to_array()))
