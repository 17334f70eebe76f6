import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from s3h.quat import (CQuaternion, ImQuaternion, Quaternion, bar, cross, embed, im,
                      improd_split, qdot, qmul, qnorm, star)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
quats = arrays(np.float64, 4, elements=finite)
vecs = arrays(np.float64, 3, elements=finite)

E = np.eye(4)


def test_unit_table():
    one, i, j, k = E
    assert np.array_equal(qmul(i, j), k)
    assert np.array_equal(qmul(j, k), i)
    assert np.array_equal(qmul(k, i), j)
    for u in (i, j, k):
        assert np.array_equal(qmul(u, u), -one)
    # e1 e2 e3 = -1
    assert np.array_equal(qmul(qmul(i, j), k), -one)


def test_star_reverses_products():
    rng = np.random.default_rng(0)
    p, q = rng.normal(size=(2, 50, 4))
    assert np.allclose(star(qmul(p, q)), qmul(star(q), star(p)), atol=1e-13)


def test_imaginary_product_split():
    a, b = np.array([1.0, 2.0, -1.0]), np.array([0.5, -3.0, 2.0])
    prod = qmul(embed(a), embed(b))
    assert prod[0] == pytest.approx(-a @ b)
    assert np.allclose(im(prod), np.cross(a, b))
    re, v = improd_split(ImQuaternion(*a), ImQuaternion(*b))
    assert re == pytest.approx(-a @ b)
    assert np.allclose(v.to_array(), np.cross(a, b))


def test_complex_product_is_bilinear():
    rng = np.random.default_rng(1)
    p = rng.normal(size=4) + 1j * rng.normal(size=4)
    q = rng.normal(size=4) + 1j * rng.normal(size=4)
    expected = qmul(p.real, q.real) - qmul(p.imag, q.imag) + 1j * (qmul(p.real, q.imag) + qmul(p.imag, q.real))
    assert np.allclose(qmul(p, q), expected, atol=1e-14)
    # the inner product is bilinear, not Hermitian
    assert qdot(p, p) == pytest.approx(np.sum(p * p))
    assert np.allclose(bar(p), np.conj(p))


def test_value_classes_round_trip():
    p = Quaternion(1.0, 2.0, 3.0, 4.0)
    q = Quaternion.from_array([0.5, -1.0, 0.0, 2.0])
    assert np.allclose((p * q).to_array(), qmul(p.to_array(), q.to_array()))
    assert p.norm() == pytest.approx(np.sqrt(30))
    assert (p * 2.0).to_array()[3] == 8.0
    c = CQuaternion.from_array(np.array([1, 2j, 0, 1 + 1j]))
    assert np.allclose((c * c).to_array(), qmul(c.to_array(), c.to_array()))
    assert np.allclose(c.bar().to_array(), np.conj(c.to_array()))


@settings(max_examples=300, deadline=None)
@given(quats, quats, quats)
def test_associativity_property(p, q, r):
    lhs, rhs = qmul(qmul(p, q), r), qmul(p, qmul(q, r))
    scale = 1 + qnorm(p) * qnorm(q) * qnorm(r)
    assert np.abs(lhs - rhs).max() <= 1e-12 * scale


@settings(max_examples=300, deadline=None)
@given(quats, quats)
def test_norm_multiplicative_property(p, q):
    assert abs(qnorm(qmul(p, q)) - qnorm(p) * qnorm(q)) <= 1e-12 * (1 + qnorm(p) * qnorm(q))


@settings(max_examples=300, deadline=None)
@given(vecs, vecs)
def test_cross_matches_numpy(a, b):
    assert np.allclose(cross(a, b), np.cross(a, b), atol=1e-12)
