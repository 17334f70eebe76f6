"""Truncated bivariate Taylor arithmetic.

A :class:`Jet` carries, at every sample point, the Taylor coefficients
``c[m, n] = d^m_x d^n_y u / (m! n!)`` of a field ``u`` up to total degree
``order``.  Sums, bilinear products and smooth scalar functions act on the
coefficients exactly, so derived quantities (frame vectors, invariants,
transforms) come with their own derivatives, accurate to rounding.

Jets are built either from closed-form partial derivatives or from grid
samples through finite differences (see :func:`s3h.grid.jet_from_samples`);
the arithmetic does not care which.
"""
from __future__ import annotations

from math import factorial

import numpy as np

__all__ = [
    "Jet", "bilinear", "lift", "sinh", "cosh", "exp", "log", "sqrt", "power",
    "arcsinh", "reciprocal", "value", "linear", "sin", "cos", "tanh",
]


def _mask(order: int) -> np.ndarray:
    m, n = np.indices((order + 1, order + 1))
    return m + n <= order


class Jet:
    """Field together with its partial derivatives up to ``order``."""

    __array_priority__ = 1000

    def __init__(self, coeffs, order: int):
        coeffs = np.asarray(coeffs)
        if coeffs.shape[:2] != (order + 1, order + 1):
            raise ValueError("coefficient array does not match order")
        self.coeffs = coeffs
        self.order = order

    # construction -------------------------------------------------------

    @classmethod
    def from_partials(cls, partials, order: int) -> Jet:
        """Build from a mapping ``(m, n) -> d^m_x d^n_y u`` for ``m + n <= order``."""
        base = np.asarray(partials[(0, 0)])
        dtype = np.result_type(*[np.asarray(v) for v in partials.values()])
        coeffs = np.zeros((order + 1, order + 1) + base.shape, dtype=dtype)
        for m in range(order + 1):
            for n in range(order + 1 - m):
                coeffs[m, n] = np.asarray(partials[(m, n)]) / (factorial(m) * factorial(n))
        return cls(coeffs, order)

    @classmethod
    def constant(cls, val, order: int) -> Jet:
        val = np.asarray(val)
        coeffs = np.zeros((order + 1, order + 1) + val.shape, dtype=val.dtype)
        coeffs[0, 0] = val
        return cls(coeffs, order)

    @classmethod
    def from_gradient(cls, val, gx: Jet, gy: Jet) -> Jet:
        """Jet of ``u`` from its values and the jets of ``u_x`` and ``u_y``.

        The result has one order more than the gradient data.  Mixed
        coefficients are taken from ``gx``; for a true gradient the two
        sources agree.
        """
        k = min(gx.order, gy.order) + 1
        val = np.asarray(val)
        dtype = np.result_type(val, gx.coeffs, gy.coeffs)
        coeffs = np.zeros((k + 1, k + 1) + val.shape, dtype=dtype)
        coeffs[0, 0] = val
        for m in range(k):
            for n in range(k - m):
                coeffs[m + 1, n] = gx.coeffs[m, n] / (m + 1)
        for n in range(k):
            coeffs[0, n + 1] = gy.coeffs[0, n] / (n + 1)
        return cls(coeffs, k)

    # access -------------------------------------------------------------

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0, 0]

    @property
    def shape(self) -> tuple:
        return self.coeffs.shape[2:]

    def partial(self, m: int, n: int) -> np.ndarray:
        if m + n > self.order:
            raise ValueError(f"jet of order {self.order} has no ({m}, {n}) partial")
        return self.coeffs[m, n] * (factorial(m) * factorial(n))

    def truncate(self, order: int) -> Jet:
        if order > self.order:
            raise ValueError("cannot raise the order of a jet")
        return Jet(self.coeffs[:order + 1, :order + 1], order)

    def dx(self) -> Jet:
        if self.order < 1:
            raise ValueError("jet of order 0 cannot be differentiated")
        k = self.order - 1
        m = np.arange(1, k + 2).reshape((-1, 1) + (1,) * len(self.shape))
        c = self.coeffs[1:, :k + 1] * m
        return Jet(np.where(_mask(k).reshape(_mask(k).shape + (1,) * len(self.shape)), c, 0), k)

    def dy(self) -> Jet:
        if self.order < 1:
            raise ValueError("jet of order 0 cannot be differentiated")
        k = self.order - 1
        n = np.arange(1, k + 2).reshape((1, -1) + (1,) * len(self.shape))
        c = self.coeffs[:k + 1, 1:] * n
        return Jet(np.where(_mask(k).reshape(_mask(k).shape + (1,) * len(self.shape)), c, 0), k)

    def d(self) -> Jet:
        """Wirtinger derivative d/dz = (d/dx - i d/dy) / 2."""
        return 0.5 * (self.dx() - 1j * self.dy())

    def dbar(self) -> Jet:
        return 0.5 * (self.dx() + 1j * self.dy())

    def shift(self, sx: float, sy: float) -> np.ndarray:
        """Evaluate the Taylor polynomial at the offset ``(sx, sy)`` from each point."""
        out = np.zeros(self.shape, dtype=self.coeffs.dtype)
        for m in range(self.order + 1):
            for n in range(self.order + 1 - m):
                out = out + self.coeffs[m, n] * (sx ** m * sy ** n)
        return out

    # arithmetic ---------------------------------------------------------

    def linear(self, fn) -> Jet:
        """Apply a map acting linearly on the trailing (value) axes."""
        return Jet(fn(self.coeffs), self.order)

    def _coerce(self, other):
        if isinstance(other, Jet):
            k = min(self.order, other.order)
            return self.truncate(k), other.truncate(k)
        return self, Jet.constant(np.broadcast_to(np.asarray(other), self.shape), self.order)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet(a.coeffs + b.coeffs, a.order)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Jet(a.coeffs - b.coeffs, a.order)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return Jet(b.coeffs - a.coeffs, a.order)

    def __neg__(self):
        return Jet(-self.coeffs, self.order)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return bilinear(np.multiply, self, other)
        # constants act coefficient-wise; trailing axes broadcast
        return Jet(self.coeffs * np.asarray(other), self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * reciprocal(other)
        return self * (1.0 / np.asarray(other))

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, p):
        if isinstance(p, int) and p >= 1:
            out = self
            for _ in range(p - 1):
                out = out * self
            return out
        return power(self, p)

    def conj(self) -> Jet:
        return Jet(np.conj(self.coeffs), self.order)

    @property
    def real(self) -> Jet:
        return Jet(self.coeffs.real, self.order)

    @property
    def imag(self) -> Jet:
        return Jet(self.coeffs.imag, self.order)

    def __getitem__(self, idx) -> Jet:
        """Index the value axes, e.g. ``j[..., 0]``."""
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.coeffs[(slice(None), slice(None)) + idx], self.order)

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, shape={self.shape}, dtype={self.coeffs.dtype})"


def bilinear(fn, a, b):
    """Apply a bilinear map ``fn`` (broadcasting over leading axes) to jets.

    Plain arrays are passed straight through to ``fn``.
    """
    if not isinstance(a, Jet) and not isinstance(b, Jet):
        return fn(a, b)
    if not isinstance(a, Jet):
        a = Jet.constant(np.asarray(a), b.order)
    if not isinstance(b, Jet):
        b = Jet.constant(np.asarray(b), a.order)
    k = min(a.order, b.order)
    ac = a.coeffs[:k + 1, :k + 1]
    bc = b.coeffs[:k + 1, :k + 1]
    out = None
    for i in range(k + 1):
        for j in range(k + 1 - i):
            term = fn(ac[i, j], bc[:k + 1 - i, :k + 1 - j])
            if out is None:
                out = np.zeros((k + 1, k + 1) + term.shape[2:], dtype=term.dtype)
            elif term.dtype != out.dtype:
                out = out.astype(np.result_type(out, term))
            out[i:, j:] += term
    mask = _mask(k).reshape(_mask(k).shape + (1,) * (out.ndim - 2))
    return Jet(np.where(mask, out, 0), k)


def lift(fn):
    """Turn a bilinear array function into one that also accepts jets."""
    def lifted(a, b):
        return bilinear(fn, a, b)
    lifted.__name__ = getattr(fn, "__name__", "lifted")
    lifted.__doc__ = fn.__doc__
    return lifted


def linear(fn, u):
    """Apply a trailing-axis linear map to a jet or an array."""
    return u.linear(fn) if isinstance(u, Jet) else fn(u)


def value(u):
    return u.value if isinstance(u, Jet) else u


def _compose(u: Jet, derivs) -> Jet:
    """g(u) from the derivatives ``derivs[k] = g^(k)(u0)``, k = 0..order."""
    k = u.order
    delta = Jet(u.coeffs.copy(), k)
    delta.coeffs[0, 0] = 0
    out = Jet.constant(derivs[0], k)
    power_k = None
    for n in range(1, k + 1):
        power_k = delta if power_k is None else power_k * delta
        out = out + power_k * (derivs[n] / factorial(n))
    return out


def _unary(u, fn, derivs_fn):
    if not isinstance(u, Jet):
        return fn(u)
    return _compose(u, derivs_fn(u.value, u.order))


def exp(u):
    return _unary(u, np.exp, lambda x, k: [np.exp(x)] * (k + 1))


def sinh(u):
    return _unary(u, np.sinh, lambda x, k: [np.sinh(x) if i % 2 == 0 else np.cosh(x) for i in range(k + 1)])


def cosh(u):
    return _unary(u, np.cosh, lambda x, k: [np.cosh(x) if i % 2 == 0 else np.sinh(x) for i in range(k + 1)])


def sin(u):
    cycle = (np.sin, np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t))
    return _unary(u, np.sin, lambda x, k: [cycle[i % 4](x) for i in range(k + 1)])


def cos(u):
    cycle = (np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t), np.sin)
    return _unary(u, np.cos, lambda x, k: [cycle[i % 4](x) for i in range(k + 1)])


def log(u):
    def derivs(x, k):
        out = [np.log(x)]
        for i in range(1, k + 1):
            out.append((-1) ** (i - 1) * factorial(i - 1) / x ** i)
        return out
    return _unary(u, np.log, derivs)


def power(u, p: float):
    def derivs(x, k):
        out = []
        c = 1.0
        for i in range(k + 1):
            out.append(c * x ** (p - i))
            c *= p - i
        return out
    return _unary(u, lambda x: x ** p, derivs)


def sqrt(u):
    return power(u, 0.5)


def reciprocal(u):
    return power(u, -1.0)


def arcsinh(u):
    if not isinstance(u, Jet):
        return np.arcsinh(u)
    return log(u + sqrt(u * u + 1.0))


def tanh(u):
    return sinh(u) / cosh(u)
