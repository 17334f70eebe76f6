import numpy as np
import pytest

from s3h import jet as J
from s3h.jet import Jet


def _poly_jet(x, y, order=4):
    """Jet of u = x^2 y + 3 y^2 at the given points, from hand-computed partials."""
    p = {(m, n): np.zeros_like(x) for m in range(order + 1) for n in range(order + 1 - m)}
    p[(0, 0)] = x * x * y + 3 * y * y
    p[(1, 0)] = 2 * x * y
    p[(0, 1)] = x * x + 6 * y
    p[(2, 0)] = 2 * y
    p[(1, 1)] = 2 * x
    p[(0, 2)] = np.full_like(x, 6.0)
    p[(2, 1)] = np.full_like(x, 2.0)
    return Jet.from_partials(p, order)


def test_partials_round_trip():
    x, y = np.array([0.3, -1.0]), np.array([2.0, 0.5])
    u = _poly_jet(x, y)
    assert np.allclose(u.partial(1, 1), 2 * x)
    assert np.allclose(u.dx().dy().value, 2 * x)
    assert np.allclose(u.shift(0.1, -0.2), (x + 0.1) ** 2 * (y - 0.2) + 3 * (y - 0.2) ** 2)


def test_product_rule_and_functions():
    x, y = np.array([0.3]), np.array([0.7])
    u = _poly_jet(x, y)
    w = J.exp(u) * u
    # d/dx (u e^u) = u_x e^u (1 + u)
    expected = 2 * x * y * np.exp(u.value) * (1 + u.value)
    assert np.allclose(w.dx().value, expected)
    s = J.sinh(u) ** 2 - J.cosh(u) ** 2
    assert np.allclose(s.coeffs[0, 0], -1)
    assert np.allclose(s.coeffs[1:].sum(), 0, atol=1e-9)
    r = J.reciprocal(u) * u
    assert np.allclose(r.dx().value, 0, atol=1e-12)


def test_from_gradient_recovers_polynomial():
    x, y = np.array([0.3, 1.1]), np.array([0.7, -0.4])
    u = _poly_jet(x, y)
    v = Jet.from_gradient(u.value, u.dx(), u.dy())
    assert v.order == u.order
    assert np.allclose(v.coeffs, u.coeffs)


def test_order_bookkeeping():
    u = Jet.constant(np.ones(3), 2)
    assert u.dx().order == 1
    with pytest.raises(ValueError):
        u.partial(2, 1)
    with pytest.raises(ValueError):
        u.truncate(3)
