import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swebc.characteristics import (
    CharVars,
    boundary_integrand,
    characteristic_jacobian,
    eigensystem,
    entropy_fluxes,
    flux_integrand,
    from_characteristic,
    to_characteristic,
    total_energy,
)
from swebc.core import PhysParams, State, UnitNormal, norm_matrix, normal_matrices, symmetrizer
from swebc.errors import NonPositiveGeopotential

from strategies import angles, gravities, normals, states

G1 = PhysParams(g=1.0)
X = UnitNormal(1.0, 0.0)
Y = UnitNormal(0.0, 1.0)


def test_total_energy_examples():
    assert total_energy(State(1, 0, 0), G1) == 0.5
    assert total_energy(State(1, 1, 0), G1) == 1.0
    assert total_energy(State(4, 1, 1), PhysParams(g=2.0)) == 6.0


def test_entropy_flux_examples():
    assert entropy_fluxes(State(2.0, 0.0, 0.0), G1) == (0.0, 0.0)
    fe, ge = entropy_fluxes(State(1, 1, 0), G1)
    assert (fe, ge) == (1.5, 0.0)
    assert entropy_fluxes(State(1, -1, 0), G1)[0] == -1.5


def test_eigensystem_examples():
    es = eigensystem(State(1, 0, 0), X)
    np.testing.assert_allclose(es.lambda_a, [1, 0, -1])
    np.testing.assert_allclose(es.lambda_n, [0.5, 0, -0.5])
    es = eigensystem(State(4, 0, 1), Y)
    np.testing.assert_allclose(es.lambda_a, [3, 1, -1])
    np.testing.assert_allclose(es.augmented, [2, 1, 0])
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(es.R, [[r, 0, r], [0, -1, 0], [r, 0, -r]], atol=1e-15)


def test_characteristic_examples():
    for a in (0.0, 1.0, 2.5):
        w = to_characteristic(State(1, 0, 0), UnitNormal.from_angle(a), G1).as_vector()
        np.testing.assert_allclose(w, [0.5, 0, 0.5], atol=1e-15)
    np.testing.assert_allclose(to_characteristic(State(1, 1, 0), X, G1).as_vector(), [1, 0, 0], atol=1e-15)
    s = from_characteristic(CharVars(0.5, 0.0, 0.5), X, G1)
    assert (s.phi, s.u, s.v) == (1.0, 0.0, 0.0)
    with pytest.raises(NonPositiveGeopotential):
        from_characteristic(CharVars(0.5, 0.0, -0.5), X, G1)


def test_boundary_integrand_examples():
    assert boundary_integrand(State(3.0, 0.0, 2.0), X, G1) == 0.0
    assert boundary_integrand(State(1, 1, 0), X, G1) == pytest.approx(1.5, abs=1e-15)
    assert flux_integrand(State(1, 1, 0), X, G1) == 1.5


@given(states(), normals())
def test_eigendecomposition(s, n):
    es = eigensystem(s, n)
    Ahat, Nhat = normal_matrices(s, n)
    R = es.R
    np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(R @ np.diag(es.lambda_a) @ R.T, Ahat, atol=1e-12)
    np.testing.assert_allclose(R @ np.diag(es.lambda_n) @ R.T, Nhat, atol=1e-12)
    c = np.sqrt(s.phi)
    un = s.u * n.nx + s.v * n.ny
    np.testing.assert_array_equal(es.augmented, np.array([un + c, un, un - c]) - np.array([c / 2, 0, -c / 2]))


@given(states(), normals(), gravities)
def test_characteristic_is_RtSq(s, n, g):
    p = PhysParams(g=g)
    R = eigensystem(s, n).R
    w_ref = R.T @ symmetrizer(s, p) @ s.as_vector()
    np.testing.assert_allclose(to_characteristic(s, n, p).as_vector(), w_ref, atol=1e-12)


@given(states(), normals(), gravities)
def test_round_trip(s, n, g):
    p = PhysParams(g=g)
    w = to_characteristic(s, n, p)
    assert w.w1 + w.w3 > 0
    back = from_characteristic(w, n, p)
    np.testing.assert_allclose([back.phi, back.u, back.v], [s.phi, s.u, s.v], rtol=1e-12, atol=1e-12)


@given(states(), normals(), gravities)
def test_flux_quadratic_identity(s, n, g):
    p = PhysParams(g=g)
    flux = flux_integrand(s, n, p)
    assert abs(boundary_integrand(s, n, p) - flux) <= 1e-12 * max(1.0, abs(flux))


@given(states(), gravities)
def test_energy_norm_matches_total_energy(s, g):
    p = PhysParams(g=g)
    q = s.as_vector()
    eps = total_energy(s, p)
    assert q @ norm_matrix(s, p) @ q == pytest.approx(eps, rel=1e-13)


@given(states(), gravities, angles)
def test_rotation_invariance(s, g, a):
    p = PhysParams(g=g)
    rot = State(s.phi, s.u * np.cos(a) - s.v * np.sin(a), s.u * np.sin(a) + s.v * np.cos(a))
    assert total_energy(rot, p) == pytest.approx(total_energy(s, p), rel=1e-12)


@given(states(), normals(), gravities)
def test_linear_variable_scaling_preserves_signs(s, n, g):
    p = PhysParams(g=g)
    w = to_characteristic(s, n, p).as_vector()
    scaled = np.sqrt(2 * g) / np.sqrt(s.phi) * w
    ratio = np.sqrt(2 * g) / np.sqrt(s.phi)
    assert ratio > 0
    np.testing.assert_array_equal(np.sign(scaled), np.sign(w))


@given(states(), normals(), gravities)
def test_wall_states_have_equal_outer_characteristics(s, n, g):
    us = s.v * n.nx - s.u * n.ny
    wall = State(s.phi, -us * n.ny, us * n.nx)
    w = to_characteristic(wall, n, PhysParams(g=g))
    assert w.w1 == pytest.approx(w.w3, rel=1e-12, abs=1e-12)
    assert abs(boundary_integrand(wall, n, PhysParams(g=g))) <= 1e-12 * max(1.0, s.phi**2)


@given(states(), normals(), gravities, st.integers(0, 2))
def test_jacobian_matches_finite_differences(s, n, g, k):
    p = PhysParams(g=g)
    J = characteristic_jacobian(s, n, p)
    q = s.as_vector()
    h = 1e-6 * max(1.0, abs(q[k]))
    dq = np.zeros(3)
    dq[k] = h
    plus = to_characteristic(State(*(q + dq)), n, p).as_vector()
    minus = to_characteristic(State(*(q - dq)), n, p).as_vector()
    np.testing.assert_allclose((plus - minus) / (2 * h), J[:, k], rtol=1e-5, atol=1e-6)


def test_array_states():
    rng = np.random.default_rng(0)
    s = State(rng.uniform(0.1, 10, 50), rng.uniform(-5, 5, 50), rng.uniform(-5, 5, 50))
    n = UnitNormal.from_angle(rng.uniform(0, 6.3, 50))
    w = to_characteristic(s, n, G1)
    assert w.as_vector().shape == (50, 3)
    assert eigensystem(s, n).R.shape == (50, 3, 3)
    back = from_characteristic(w, n, G1)
    np.testing.assert_allclose(back.u, s.u, atol=1e-12)
