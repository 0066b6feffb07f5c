import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from swebc.bc import (
    Regime,
    augmented_eigenvalues,
    boundary_quadratic,
    build_bc,
    check_partition,
    classify,
    classify_nodes,
    coefficient_count,
    compare_analyses,
    eigen_witness,
    ellipse_boundary,
    ellipse_semi_axes,
    froude,
    impose,
    inflow_ellipse_contains,
    inflow_ellipse_slack,
    outflow_ellipse_contains,
    outflow_ellipse_slack,
    partition,
    random_witness,
    required_bc_count,
    stability_check,
    stability_matrix,
    subcritical_lambdas,
    table1_residuals,
)
from swebc.characteristics import CharVars, augmented_values, boundary_integrand, from_characteristic
from swebc.core import PhysParams, State, UnitNormal
from swebc.errors import (
    AmbiguousRegime,
    OutOfRegime,
    PartitionMismatch,
    UnstableCoefficients,
    WrongCoefficientCount,
)

from oracles import axis_root, margin, negative_count
from strategies import normals, states

X = UnitNormal(1.0, 0.0)
EDGE_NORMALS = {"left": UnitNormal(-1.0, 0.0), "right": X, "bottom": UnitNormal(0.0, -1.0), "top": UnitNormal(0.0, 1.0)}
band = st.floats(0.01, 0.49)
coef = st.floats(-3.0, 3.0)


def test_froude_examples():
    assert froude(State(1, 0, 0), X) == 0
    assert froude(State(4, 1, 0), X) == 0.5
    assert froude(State(1, -2, 0), X) == 2.0


def test_augmented_eigenvalue_examples():
    assert augmented_eigenvalues(State(1, 0, 0), X) == (0.5, 0.0, -0.5)
    assert augmented_eigenvalues(State(4, 0.5, 0), X) == (1.5, 0.5, -0.5)
    assert augmented_eigenvalues(State(4, 1.5, 0), X) == (2.5, 1.5, 0.5)


def test_classify_examples():
    assert classify(State(4, -0.5, 0), X) is Regime.SubcriticalInflowLowFr
    assert classify(State(4, 1.5, 0), X) is Regime.SubcriticalOutflowHighFr
    assert classify(State(1, 0, 5), X) is Regime.Wall
    assert classify(State(1, -2, 0), X) is Regime.SupercriticalInflow
    assert classify(State(1, 2, 0), X) is Regime.SupercriticalOutflow
    for u in (0.5, -0.5, 1.0, -1.0):
        with pytest.raises(AmbiguousRegime):
            classify(State(1, u, 0), X)
    # tolerances are configurable
    assert classify(State(1, 1e-6, 0), X, wall_tol=1e-5) is Regime.Wall
    assert classify(State(1, 0.5 + 1e-6, 0), X, fr_tol=1e-9) is Regime.SubcriticalOutflowHighFr


def test_classify_nodes_marks_ambiguous():
    s = State(np.ones(3), np.array([0.25, 0.5, 2.0]), np.zeros(3))
    assert classify_nodes(s, X) == [Regime.SubcriticalOutflowLowFr, None, Regime.SupercriticalOutflow]


def test_required_counts():
    expect = {
        Regime.SupercriticalInflow: 3,
        Regime.SubcriticalInflowHighFr: 3,
        Regime.SubcriticalInflowLowFr: 2,
        Regime.SubcriticalOutflowLowFr: 1,
        Regime.Wall: 1,
        Regime.SubcriticalOutflowHighFr: 0,
        Regime.SupercriticalOutflow: 0,
    }
    assert {r: required_bc_count(r) for r in Regime} == expect


@given(states(), normals())
def test_count_matches_negative_eigenvalues(s, n):
    try:
        r = classify(s, n)
    except AmbiguousRegime:
        assume(False)
    lam = augmented_values(s, n)
    assert required_bc_count(r) == negative_count(lam, tol=1e-12 * np.sqrt(s.phi))
    out, inc = partition(r)
    assert all(lam[i] < 0 for i in inc)
    assert all(lam[i] >= -1e-12 * max(1, np.max(np.abs(lam))) for i in out)


def test_stability_check_examples():
    lam = subcritical_lambdas(0.25, "inflow")
    ok, m = stability_check(build_bc("SubcriticalInflowLowFr", (0, 0), fr=0.25), lam)
    assert ok and m == pytest.approx(lam[0])
    ok, m = stability_check(build_bc("SubcriticalInflowLowFr", (0, 1), validate=False), lam)
    assert not ok and m == pytest.approx(2 * -0.25)

    lam = subcritical_lambdas(0.25, "outflow")
    bc = build_bc("SubcriticalOutflowLowFr", (1, 0), fr=0.25)
    np.testing.assert_allclose(stability_matrix(bc, lam), np.diag([0.5, 0.25]))
    assert stability_check(bc, lam)[0]

    assert stability_check(build_bc("SupercriticalInflow"), [-0.5, -1.0, -1.5]) == (True, 0.0)
    assert stability_check(build_bc("SupercriticalOutflow"), [2.5, 2.0, 1.5]) == (True, 1.5)
    with pytest.raises(PartitionMismatch):
        stability_check(build_bc("SupercriticalOutflow"), [0.5, 0.0, -0.5])
    with pytest.raises(PartitionMismatch):
        check_partition(build_bc("SubcriticalInflowLowFr", (0, 0), validate=False), subcritical_lambdas(0.25, "outflow"))


def test_wall_spec_is_stable():
    lam = augmented_values(State(2.0, 0.0, 1.0), X)
    ok, m = stability_check(build_bc("Wall"), lam)
    assert ok and m == pytest.approx(0.0, abs=1e-15)


def test_ellipse_examples():
    assert inflow_ellipse_contains(0.25, 0, 0)
    assert inflow_ellipse_contains(0.25, 1, 0)
    assert inflow_ellipse_slack(0.25, 1, 0) == 0.0
    assert not inflow_ellipse_contains(0.25, 0, 1)
    assert outflow_ellipse_contains(0.25, 0, 0)
    assert outflow_ellipse_contains(0.25, 1, 0) and outflow_ellipse_contains(0.25, -1, 0)
    np.testing.assert_allclose(ellipse_semi_axes(0.25, "inflow"), (1.0, 1 / np.sqrt(3)), rtol=1e-15)
    np.testing.assert_allclose(ellipse_semi_axes(0.25, "outflow"), (np.sqrt(3), 1.0), rtol=1e-15)
    for bad in (0.0, 0.5, 0.6, -0.1):
        with pytest.raises(OutOfRegime):
            inflow_ellipse_contains(bad, 0, 0)
        with pytest.raises(OutOfRegime):
            ellipse_boundary(bad, "outflow", 8)


def test_ellipse_boundary_examples():
    pts = ellipse_boundary(0.25, "inflow", 4)
    expect = [(1, 0), (0, 1 / np.sqrt(3)), (-1, 0), (0, -1 / np.sqrt(3))]
    np.testing.assert_allclose(pts, expect, atol=1e-15)
    # limits toward Fr = 1/2
    a_out = ellipse_semi_axes(0.4999, "outflow")
    assert min(a_out) > 50
    a_in = ellipse_semi_axes(0.4999, "inflow")
    assert max(a_in) < 0.02
    with pytest.raises(ValueError):
        ellipse_boundary(0.25, "inflow", 2)


@pytest.mark.parametrize("kind", ["inflow", "outflow"])
@pytest.mark.parametrize("fr", [0.05, 0.25, 0.45])
def test_semi_axes_match_bisection(kind, fr):
    a, b = ellipse_semi_axes(fr, kind)
    assert axis_root(fr, kind, 0) == pytest.approx(a, rel=1e-10)
    assert axis_root(fr, kind, 1) == pytest.approx(b, rel=1e-10)


@given(band, coef, coef)
def test_ellipse_energy_test_equivalence(fr, gamma, theta):
    for kind, slack in (("inflow", inflow_ellipse_slack), ("outflow", outflow_ellipse_slack)):
        s = slack(fr, gamma, theta)
        assume(abs(s) > 1e-9)
        assert (s >= 0) == (margin(fr, kind, gamma, theta) >= 0)


@given(band, coef, coef)
def test_outflow_discriminant_implies_positive_diagonal(fr, gamma, theta):
    lam = subcritical_lambdas(fr, "outflow")
    M = stability_matrix(build_bc("SubcriticalOutflowLowFr", (gamma, theta), validate=False), lam)
    if np.linalg.det(M) >= 0:
        assert M[0, 0] >= -1e-12 and M[1, 1] >= -1e-12


@given(band, coef, coef, st.sampled_from(["inflow", "outflow"]))
def test_witnesses(fr, gamma, theta, kind):
    slack = inflow_ellipse_slack if kind == "inflow" else outflow_ellipse_slack
    s = slack(fr, gamma, theta)
    assume(abs(s) > 1e-6)
    regime = "SubcriticalInflowLowFr" if kind == "inflow" else "SubcriticalOutflowLowFr"
    bc = build_bc(regime, (gamma, theta), validate=False)
    lam = subcritical_lambdas(fr, kind)
    w = eigen_witness(bc, lam)
    rnd = random_witness(bc, lam, np.random.default_rng(0), trials=2000)
    if s < 0:
        assert w is not None and boundary_quadratic(lam, w) < 0
        # the witness honours the imposed relation
        np.testing.assert_allclose(w, impose(bc, w[list(bc.outgoing)]))
    else:
        assert w is None and rnd is None


def test_build_bc_examples():
    bc = build_bc("SubcriticalInflowLowFr", [0, 0], fr=0.25)
    np.testing.assert_array_equal(bc.reflection, [[0.0], [0.0]])
    assert (bc.outgoing, bc.incoming) == ((0,), (1, 2))
    bc = build_bc("SubcriticalOutflowLowFr", [0, 0], fr=0.25)
    np.testing.assert_array_equal(bc.reflection, [[0.0, 0.0]])
    assert bc.incoming == (2,)
    bc = build_bc("SupercriticalOutflow", [])
    assert bc.reflection.shape == (0, 3) and bc.count == 0
    assert build_bc("SupercriticalInflow").reflection.shape == (3, 0)
    with pytest.raises(WrongCoefficientCount):
        build_bc("SubcriticalInflowLowFr", [0.0])
    with pytest.raises(WrongCoefficientCount):
        build_bc("Wall", [1.0])
    with pytest.raises(UnstableCoefficients):
        build_bc("SubcriticalInflowLowFr", [0, 1], fr=0.25)
    with pytest.raises(ValueError):
        build_bc("SubcriticalOutflowLowFr", [0, 0])
    assert coefficient_count("Wall") == 0
    with pytest.raises(WrongCoefficientCount):
        bc.with_external_data([1.0])


def test_compare_examples():
    c = 2.0
    cases = {
        (-0.75, "in"): (3, 2, 3),
        (0.75, "out"): (0, 1, 0),
        (-0.25, "in"): (2, 2, 3),
        (0.25, "out"): (1, 1, 0),
    }
    for (fr, _), expect in cases.items():
        cmp = compare_analyses(State(c * c, fr * c, 0.3), X)
        assert cmp.as_tuple() == expect
    assert compare_analyses(State(1.0, 0.0, 2.0), X).as_tuple() == (1, 1, 1)
    with pytest.raises(AmbiguousRegime):
        compare_analyses(State(1.0, 1.0, 0.0), X)


@given(st.floats(0.01, 0.49), st.floats(0.51, 0.99), st.floats(0.1, 10))
def test_entropy_count_differs_somewhere(fr_low, fr_high, phi):
    c = np.sqrt(phi)
    counts = [compare_analyses(State(phi, sgn * fr * c, 0.0), X) for fr in (fr_low, fr_high) for sgn in (-1, 1)]
    assert {k.regime for k in counts} == {
        Regime.SubcriticalInflowLowFr, Regime.SubcriticalOutflowLowFr,
        Regime.SubcriticalInflowHighFr, Regime.SubcriticalOutflowHighFr,
    }
    assert any(k.nonlinear_count != k.entropy_count for k in counts)
    # low-Froude inflow: two conditions versus three
    assert (counts[0].nonlinear_count, counts[0].entropy_count) == (2, 3)


@given(states(), normals())
def test_wall_classification_means_zero_flux(s, n):
    us = s.v * n.nx - s.u * n.ny
    wall = State(s.phi, -us * n.ny, us * n.nx)
    if classify(wall, n) is Regime.Wall:
        assert abs(boundary_integrand(wall, n, PhysParams(g=1.0))) <= 1e-12 * max(1, s.phi**2)


def _char_state(w, n, p):
    return from_characteristic(CharVars(*w), n, p)


@pytest.mark.parametrize("edge", ["left", "bottom", "right", "top"])
@given(gamma=coef, theta=st.floats(-0.9, 3.0), w1=st.floats(0.05, 5.0), g=st.sampled_from([1.0, 9.81]))
def test_primitive_rows_inflow_rows(edge, gamma, theta, w1, g):
    p = PhysParams(g=g)
    n = EDGE_NORMALS[edge]
    bc = build_bc("SubcriticalInflowLowFr", (gamma, theta), validate=False)
    s = _char_state((w1, gamma * w1, theta * w1), n, p)
    scale = max(1.0, s.phi, abs(s.u) * np.sqrt(s.phi), abs(s.v) * np.sqrt(s.phi))
    assert np.max(np.abs(table1_residuals(bc, s, n, p))) <= 1e-12 * scale * max(1, abs(gamma), abs(theta))

    bad = _char_state((w1, gamma * w1 + 0.1, theta * w1), n, p)
    assert np.max(np.abs(table1_residuals(bc, bad, n, p))) > 1e-6


@pytest.mark.parametrize("edge", ["right", "top", "left", "bottom"])
@given(gamma=st.floats(-0.9, 3.0), theta=coef, w1=st.floats(0.05, 5.0), w2=st.floats(-5, 5))
def test_primitive_rows_outflow_rows(edge, gamma, theta, w1, w2):
    p = PhysParams(g=1.0)
    n = EDGE_NORMALS[edge]
    bc = build_bc("SubcriticalOutflowLowFr", (gamma, theta), validate=False)
    w3 = gamma * w1 + theta * w2
    assume(w1 + w3 > 0.05)
    s = _char_state((w1, w2, w3), n, p)
    scale = max(1.0, s.phi, abs(s.u) * np.sqrt(s.phi), abs(s.v) * np.sqrt(s.phi))
    assert np.max(np.abs(table1_residuals(bc, s, n, p))) <= 1e-11 * scale * max(1, abs(gamma), abs(theta))
    bad = _char_state((w1, w2, w3 + 0.1), n, p)
    assert np.max(np.abs(table1_residuals(bc, bad, n, p))) > 1e-6


def test_primitive_rows_literal_rows():
    phi, u, v, g_, t_ = 2.0, -0.3, 0.4, 0.2, -0.1
    c = np.sqrt(phi)
    s = State(phi, u, v)
    left = table1_residuals(build_bc("SubcriticalInflowLowFr", (g_, t_), validate=False), s, EDGE_NORMALS["left"])
    np.testing.assert_allclose(left, [c * v * np.sqrt(2) + g_ * (phi - c * u), phi * (1 - t_) + c * u * (1 + t_)])
    right = table1_residuals(build_bc("SubcriticalOutflowLowFr", (g_, t_), validate=False), s, X)
    np.testing.assert_allclose(right, [phi * (1 - g_) - c * u * (1 + g_) - t_ * c * v * np.sqrt(2)])


def test_primitive_rows_other_regimes():
    s = State(1e-30, 0.0, 0.0)
    res = table1_residuals(build_bc("SupercriticalInflow"), s, X)
    np.testing.assert_allclose(res, 0.0, atol=1e-29)
    assert table1_residuals(build_bc("SupercriticalOutflow"), State(1, 3, 0), X).size == 0
    np.testing.assert_array_equal(table1_residuals(build_bc("Wall"), State(1, 0, 2), X), [0.0])
    with pytest.raises(ValueError):
        table1_residuals(build_bc("Wall"), State(1, 0, 2), UnitNormal(0.6, 0.8))
