import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import great_sphere_jet
from s3h.congruence import procrustes_o4
from s3h.errors import (ConformalInputError, NotOnManifoldError, NotTangentError, WenteGateError,
                        ZeroLambdaError)
from s3h.family import clifford_map, clifford_params
from s3h.frame import build_frame
from s3h.grid import Grid, GridField, diff, interior_sup_norm
from s3h.hsurface import (WENTE_H, WENTE_LAMBDA, HSurfaceField, NKPoint, NKTangent, dilate,
                          h_eps_transform, h_from_harmonic, harmonic_from_h, holo_differential,
                          holo_residual, nk_J, nk_P, nk_g, nk_structure, surface_report, wente_residual)
from s3h.quat import qdot
from s3h.transform import eps_transform, transform_coeffs


#: a member with moderate frequencies: its finite-difference error constants sit well below 10
GENERIC = clifford_map(clifford_params(0.6, 0.4))


@pytest.fixture(scope="module")
def square_surface(square_frame):
    return h_from_harmonic(square_frame)


@pytest.fixture(scope="module")
def generic_frame(grid64):
    return GENERIC.frame(grid64)


@pytest.fixture(scope="module")
def generic_surface(generic_frame):
    return h_from_harmonic(generic_frame)


@pytest.mark.parametrize("torus,const", [(GENERIC, 10.0), (clifford_map(clifford_params(2 ** -0.5, np.arcsinh(1))), 40.0)])
def test_wente_residual_second_order(torus, const):
    res = []
    for n in (33, 65, 129):
        g = Grid.from_bounds(0, 1, 0, 1, n, n)
        surf = h_from_harmonic(torus.frame(g))
        res.append(interior_sup_norm(wente_residual(surf)))
        assert res[-1] < const * g.h ** 2
    assert 3.5 < res[0] / res[1] < 4.5 and 3.5 < res[1] / res[2] < 4.5


def test_opposite_sign_is_not_satisfied(square_surface):
    assert interior_sup_norm(wente_residual(square_surface, H=+1.0)) > 1.0


def test_integrability_and_tangents(square_frame, square_surface):
    assert square_surface.notes["ab1"] < 1e-12 and square_surface.notes["ab2"] < 1e-12
    assert np.abs(square_surface.Xx - square_frame.beta).max() < 1e-13
    assert np.abs(square_surface.Xy + square_frame.alpha).max() < 1e-13


def test_holomorphic_differential_is_one(square_surface):
    assert np.abs(square_surface.holo.values - 1).max() < 1e-12
    g = square_surface.grid
    assert interior_sup_norm(holo_residual(square_surface)) < 10 * g.h ** 2


def test_round_trip_recovers_invariants(square_frame, square_surface):
    back = harmonic_from_h(square_surface)
    assert np.abs(back.phi - square_frame.phi).max() < 1e-6
    assert np.abs(back.mu - square_frame.mu).max() < 1e-6
    assert procrustes_o4(back.f, square_frame.f).residual < 1e-5


def test_round_trip_from_samples(square_torus):
    g = Grid.from_bounds(0, 1, 0, 1, 65, 65)
    fr = build_frame(square_torus.sample(g))
    surf = h_from_harmonic(fr)
    back = harmonic_from_h(surf)
    assert procrustes_o4(back.f, fr.f).residual < 10 * g.h ** 2


def test_sphere_patch_is_conformal_input():
    g = Grid.from_bounds(-0.5, 0.5, -0.5, 0.5, 65, 65)
    X, Y = g.mesh()
    d = 1 + X ** 2 + Y ** 2
    sphere = np.stack([2 * X / d, 2 * Y / d, (X ** 2 + Y ** 2 - 1) / d], axis=-1)
    with pytest.raises(ConformalInputError):
        harmonic_from_h(HSurfaceField.from_samples(GridField(g, sphere)))


def test_scaled_surface_fails_wente_gate(square_surface):
    doubled = HSurfaceField.from_samples(GridField(square_surface.grid, 2 * square_surface.X.values))
    with pytest.raises(WenteGateError):
        harmonic_from_h(doubled)


def test_dilations(generic_surface):
    square_surface = generic_surface
    h2 = square_surface.grid.h ** 2
    same = dilate(square_surface, 1.0)
    assert np.array_equal(same.X.values, square_surface.X.values) and same.H == square_surface.H
    w = dilate(square_surface, WENTE_LAMBDA)
    assert w.H == pytest.approx(WENTE_H)
    assert surface_report(w)["wente"] < 10 * h2
    half = dilate(square_surface, 2.0)
    assert half.H == pytest.approx(-0.5)
    # the residual itself scales with lambda
    assert surface_report(half)["wente"] < 2 * 10 * h2
    assert interior_sup_norm(wente_residual(half, H=-1.0)) > 1.0
    with pytest.raises(ZeroLambdaError):
        dilate(square_surface, 0.0)


@pytest.mark.parametrize("eps", [1, -1])
def test_surface_transform_contract(generic_frame, generic_surface, eps):
    square_frame, square_surface = generic_frame, generic_surface
    g = square_frame.grid
    xe = h_eps_transform(square_surface, eps)
    c = transform_coeffs(square_frame, eps)
    X = xe.X.values
    assert interior_sup_norm(diff(X, g, 1, 0) - c.beta.values) < 10 * g.h ** 2
    assert interior_sup_norm(diff(X, g, 0, 1) + c.alpha.values) < 10 * g.h ** 2
    assert interior_sup_norm(wente_residual(xe)) < 10 * g.h ** 2


@pytest.mark.parametrize("eps", [1, -1])
def test_square_commutes_on_great_sphere(eps):
    """Transform-then-integrate equals integrate-then-transform up to a translation."""
    g = Grid.from_bounds(0.05, 0.25, 0, 0.2, 33, 33)
    fr = build_frame(great_sphere_jet(g), g)
    a = h_from_harmonic(eps_transform(fr, eps).result).X.values
    b = h_eps_transform(h_from_harmonic(fr), eps).X.values
    d = a - b
    assert np.abs(d - d[0, 0]).max() < 1e-8


def test_transform_requires_h_minus_one(square_surface):
    with pytest.raises(ValueError):
        h_eps_transform(dilate(square_surface, 2.0), 1)


# ---------------------------------------------------------------------------
# nearly Kaehler structure

E0, E1 = np.eye(4)[0], np.eye(4)[1]
ZERO = np.zeros(4)


def _random_tangent(rng, p, q):
    u, v = rng.normal(size=(2,) + p.shape)
    return NKTangent(u - qdot(u, p)[..., None] * p, v - qdot(v, q)[..., None] * q)


def test_J_at_identity():
    JZ, PZ, g = nk_structure(NKPoint(E0, E0), NKTangent(E1, ZERO))
    assert np.allclose(JZ.U, -E1 / np.sqrt(3)) and np.allclose(JZ.V, -2 * E1 / np.sqrt(3))
    JJ = nk_J(NKPoint(E0, E0), JZ)
    assert np.allclose(JJ.U, -E1) and np.allclose(JJ.V, ZERO)
    assert np.allclose(PZ.U, ZERO) and np.allclose(PZ.V, E1)
    PP = nk_P(NKPoint(E0, E0), PZ)
    assert np.allclose(PP.U, E1) and np.allclose(PP.V, ZERO)
    assert g(NKTangent(E1, ZERO), NKTangent(E1, ZERO)) == pytest.approx(0.5 * (1 + 5 / 3))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_structure_identities_property(seed):
    rng = np.random.default_rng(seed)
    p, q = rng.normal(size=(2, 20, 4))
    p /= np.linalg.norm(p, axis=-1, keepdims=True)
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    pt = NKPoint(p, q)
    Z, W = _random_tangent(rng, p, q), _random_tangent(rng, p, q)
    JZ, PZ, g = nk_structure(pt, Z)
    assert abs(qdot(JZ.U, p)).max() < 1e-12 and abs(qdot(PZ.V, q)).max() < 1e-12
    assert np.abs(np.concatenate(nk_J(pt, JZ)) + np.concatenate(Z)).max() < 1e-12
    assert np.abs(np.concatenate(nk_P(pt, PZ)) - np.concatenate(Z)).max() < 1e-12
    assert np.abs(g(nk_J(pt, Z), nk_J(pt, W)) - g(Z, W)).max() < 1e-12
    assert np.abs(nk_g(pt, Z, W) - nk_g(pt, W, Z)).max() < 1e-12


def test_manifold_and_tangency_checks():
    with pytest.raises(NotOnManifoldError):
        nk_structure(NKPoint(2 * E0, E0), NKTangent(E1, ZERO))
    with pytest.raises(NotTangentError):
        nk_structure(NKPoint(E0, E0), NKTangent(E0, ZERO))


def test_holo_differential_of_constant_map_vanishes():
    g = Grid.from_bounds(0, 1, 0, 1, 9, 9)
    psi = np.broadcast_to(np.concatenate([E0, E1]), g.shape + (8,))
    hd = holo_differential(GridField(g, psi))
    assert np.abs(hd.values.values).max() == 0 and hd.dbar_residual == 0
    assert hd.relation_residual is None


def test_holo_differential_of_circle_map():
    """psi = ((cos t, sin t, 0, 0), q0) with t = a x + b y gives -(a - i b)^2 / 6."""
    a, b = 1.3, 0.7
    out = []
    for n in (33, 65):
        g = Grid.from_bounds(0, 1, 0, 1, n, n)
        X, Y = g.mesh()
        t = a * X + b * Y
        p = np.stack([np.cos(t), np.sin(t), 0 * t, 0 * t], axis=-1)
        q = np.broadcast_to(np.full(4, 0.5), p.shape)
        hd = holo_differential(GridField(g, np.concatenate([p, q], axis=-1)))
        out.append(interior_sup_norm(hd.values.values + (a - 1j * b) ** 2 / 6))
        assert hd.dbar_residual < 10 * g.h ** 2
    assert 3.5 < out[0] / out[1] < 4.5


def test_holo_relation_is_reported(square_surface):
    g = square_surface.grid
    psi = np.broadcast_to(np.concatenate([E0, E0]), g.shape + (8,))
    hd = holo_differential(GridField(g, psi), square_surface)
    assert hd.relation_residual == pytest.approx(1.0)
    with pytest.raises(NotOnManifoldError):
        holo_differential(GridField(g, 2 * psi))
