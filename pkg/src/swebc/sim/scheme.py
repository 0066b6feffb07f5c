"""Semi-discrete shallow water operator with weak characteristic boundary terms.

Interior: the non-conservative equations in vector-invariant arrangement,

    phi_t = -D_x(phi u) - D_y(phi v)
    u_t   =  (zeta - f) v - D_x(K + phi)
    v_t   = -(zeta - f) u - D_y(K + phi)

with ``K = (u^2 + v^2)/2``, ``zeta = D_x v - D_y u`` and ``D`` the SBP
operator of :mod:`.operators`. Contracting with ``H de/dq`` leaves only the
trapezoidal boundary integral of the energy flux, so the interior neither
creates nor destroys energy.

Walls set the normal velocity tendency to zero. Open edges get a penalty
on the incoming characteristic residual ``w_in - R w_out - g_ext``, mapped
to primitive variables through ``(dw/dq)^-1``; with unit strength the
energy rate through such an edge is
``-(w_out^T (Lambda_out + R^T Lambda_in R) w_out + r^T |Lambda_in| r)``.
"""

from __future__ import annotations

import numpy as np

from ..bc import BCSpec, Regime, classify_nodes
from ..characteristics import (
    augmented_values,
    boundary_integrand,
    characteristic_jacobian,
    flux_integrand,
    to_characteristic,
)
from ..errors import RegimeMismatch
from .grid import EDGE_NORMALS, EDGES, NORMAL_COMPONENT, Field, check_wet
from .operators import second_difference_dissipation, sbp_diff


def interior_tendency(field: Field) -> np.ndarray:
    g = field.grid
    phi, u, v = field.q
    f = field.params.f
    bern = 0.5 * (u**2 + v**2) + phi
    zeta = sbp_diff(v, g.hx, 0) - sbp_diff(u, g.hy, 1)
    dphi = -sbp_diff(phi * u, g.hx, 0) - sbp_diff(phi * v, g.hy, 1)
    du = (zeta - f) * v - sbp_diff(bern, g.hx, 0)
    dv = -(zeta - f) * u - sbp_diff(bern, g.hy, 1)
    return np.stack([dphi, du, dv])


def _entropy_variables(q: np.ndarray) -> np.ndarray:
    phi, u, v = q
    return np.stack([phi - 0.5 * (u**2 + v**2), u, v])


def _conservative_metric(q: np.ndarray, grav: float) -> np.ndarray:
    """``dU/ds`` for ``U = (h, hu, hv)``: SPD whenever ``phi > 0``."""
    phi, u, v = q
    one = np.ones_like(phi)
    rows = [[one, u, v], [u, u * u + phi, u * v], [v, u * v, v * v + phi]]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2) / grav


def dissipation_tendency(field: Field, coefficient: float) -> np.ndarray:
    """Second-difference dissipation acting on the entropy variables.

    Built in conservative variables and mapped back to ``(phi, u, v)``;
    its energy contribution is a negative sum of squares.
    """
    g = field.grid
    q = field.q
    grav = field.params.g
    speed = float(np.max(np.maximum(np.abs(q[1]), np.abs(q[2])) + np.sqrt(q[0])))
    s = _entropy_variables(q)
    B = _conservative_metric(q, grav)
    dU = coefficient * speed * (
        second_difference_dissipation(s, B, g.wx, axis=0)
        + second_difference_dissipation(s, B, g.wy, axis=1)
    )
    phi, u, v = q
    h = phi / grav
    dh, dm, dn = dU
    return np.stack([grav * dh, (dm - u * dh) / h, (dn - v * dh) / h])


def penalty_terms(field: Field, edge: str, bc: BCSpec, strength: float = 1.0) -> np.ndarray:
    """Penalty ``(dw/dq)^-1 sigma`` at the nodes of ``edge`` (not yet divided by the norm)."""
    s = field.edge_state(edge)
    n = EDGE_NORMALS[edge]
    p = field.params
    w = to_characteristic(s, n, p).as_vector()
    lam = augmented_values(s, n)
    inc, out = list(bc.incoming), list(bc.outgoing)
    resid = w[:, inc] - w[:, out] @ bc.reflection.T - bc.external_data
    sigma = np.zeros_like(w)
    sigma[:, inc] = -strength * np.abs(lam[:, inc]) * resid
    J = characteristic_jacobian(s, n, p)
    return np.linalg.solve(J, sigma[..., None])[..., 0].T


def incoming_residuals(field: Field, edge: str, bc: BCSpec) -> np.ndarray:
    s = field.edge_state(edge)
    w = to_characteristic(s, EDGE_NORMALS[edge], field.params).as_vector()
    return w[:, list(bc.incoming)] - w[:, list(bc.outgoing)] @ bc.reflection.T - bc.external_data


def edge_regimes(field: Field, edge: str) -> list:
    return classify_nodes(field.edge_state(edge), EDGE_NORMALS[edge])


def regime_mismatches(field: Field, bcs: dict[str, BCSpec]) -> dict[str, dict[str, int]]:
    """Per-edge count of nodes whose instantaneous regime differs from the configured one."""
    out = {}
    for edge in EDGES:
        want = bcs[edge].regime
        found = edge_regimes(field, edge)
        bad = {}
        for r in found:
            if r is not want:
                key = "Ambiguous" if r is None else r.value
                bad[key] = bad.get(key, 0) + 1
        if bad:
            out[edge] = bad
    return out


def rhs(field: Field, bcs: dict[str, BCSpec] | None, penalty: float = 1.0,
        dissipation: float = 0.0, strict: bool = False) -> np.ndarray:
    """Time derivative of ``field.q``.

    ``bcs`` maps each edge name to its :class:`BCSpec`; ``None`` gives the
    bare interior operator with no boundary treatment. With ``strict`` set,
    a boundary node whose regime differs from its edge's configuration
    raises :class:`RegimeMismatch`.
    """
    check_wet(field.q)
    dq = interior_tendency(field)
    if dissipation:
        dq += dissipation_tendency(field, dissipation)
    if bcs is None:
        return dq
    if strict:
        bad = regime_mismatches(field, bcs)
        if bad:
            raise RegimeMismatch(f"boundary regimes differ from configuration: {bad}")

    g = field.grid
    for edge in EDGES:
        bc = bcs[edge]
        if bc.regime is Regime.Wall or not bc.incoming:
            continue
        idx = g.edge_index(edge)
        sat = penalty_terms(field, edge, bc, penalty) / g.normal_weight(edge)
        for k in range(3):
            dq[k][idx] += sat[k]
    for edge in EDGES:
        if bcs[edge].regime is Regime.Wall:
            dq[NORMAL_COMPONENT[edge]][g.edge_index(edge)] = 0.0
    return dq


def project_walls(field: Field, bcs: dict[str, BCSpec]) -> Field:
    """Zero the normal velocity on wall edges."""
    out = field.copy()
    for edge in EDGES:
        if bcs[edge].regime is Regime.Wall:
            out.q[NORMAL_COMPONENT[edge]][field.grid.edge_index(edge)] = 0.0
    return out


def energy_density_gradient(field: Field) -> np.ndarray:
    """``d eps / d q = ((K + phi), phi u, phi v) / g``."""
    phi, u, v = field.q
    grav = field.params.g
    return np.stack([0.5 * (u**2 + v**2) + phi, phi * u, phi * v]) / grav


def quadrature(field: Field, values: np.ndarray) -> float:
    g = field.grid
    return float(g.wx @ values @ g.wy)


def energy_norm(field: Field) -> float:
    """Trapezoidal integral of the total energy density."""
    phi, u, v = field.q
    eps = (phi * (u**2 + v**2) + phi**2) / (2.0 * field.params.g)
    return quadrature(field, eps)


def energy_rate(field: Field, dq: np.ndarray) -> float:
    """Discrete ``dE/dt`` implied by a tendency ``dq``."""
    return quadrature(field, np.sum(energy_density_gradient(field) * dq, axis=0))


def boundary_flux_terms(field: Field, edge: str) -> tuple[np.ndarray, np.ndarray]:
    """Energy-flux integrand along an edge by the flux and the characteristic routes."""
    s = field.edge_state(edge)
    n = EDGE_NORMALS[edge]
    return flux_integrand(s, n, field.params), boundary_integrand(s, n, field.params)


def boundary_flux_audit(field: Field, check: bool = True, rtol: float = 1e-12) -> float:
    """Trapezoidal line integral of ``f_eps nx + g_eps ny`` over the boundary.

    With ``check`` the characteristic quadratic form is evaluated at every
    boundary node as well and any disagreement beyond ``rtol`` (floor 1)
    raises ``ArithmeticError``.
    """
    total = 0.0
    for edge in EDGES:
        flux, quad = boundary_flux_terms(field, edge)
        if check:
            err = np.abs(flux - quad) / np.maximum(1.0, np.abs(flux))
            if np.max(err) > rtol:
                raise ArithmeticError(f"energy-flux routes disagree on {edge}: {np.max(err):.3e}")
        total += float(field.grid.edge_weights(edge) @ flux)
    return total
