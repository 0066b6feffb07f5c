"""Explicit time stepping with energy and boundary-flux monitoring."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..bc import BCSpec
from ..errors import Divergence, DryState, RegimeMismatch
from .grid import EDGES, Field
from .scheme import boundary_flux_audit, edge_regimes, energy_norm, project_walls, rhs

log = logging.getLogger(__name__)

DEFAULT_CFL = 0.4
BLOWUP_FACTOR = 1e6


@dataclass
class EnergyReport:
    """Per-step history of a run.

    ``regime_log[k][edge]`` counts boundary nodes per instantaneous regime
    after ``k`` steps; ``mismatches`` records the steps at which some edge
    left its configured regime.
    """

    times: list[float] = dc_field(default_factory=list)
    energy: list[float] = dc_field(default_factory=list)
    boundary_flux: list[float] = dc_field(default_factory=list)
    regime_log: list[dict[str, dict[str, int]]] = dc_field(default_factory=list)
    mismatches: list[tuple[int, dict]] = dc_field(default_factory=list)
    status: str = "running"

    def record(self, t: float, f: Field, bcs: dict[str, BCSpec]) -> None:
        self.times.append(float(t))
        self.energy.append(energy_norm(f))
        self.boundary_flux.append(boundary_flux_audit(f))
        summary, bad = {}, {}
        for edge in EDGES:
            counts: dict[str, int] = {}
            want = bcs[edge].regime
            for r in edge_regimes(f, edge):
                key = "Ambiguous" if r is None else r.value
                counts[key] = counts.get(key, 0) + 1
            summary[edge] = counts
            other = {k: v for k, v in counts.items() if k != want.value}
            if other:
                bad[edge] = other
        self.regime_log.append(summary)
        if bad:
            self.mismatches.append((len(self.times) - 1, bad))

    def as_rows(self):
        return zip(self.times, self.energy, self.boundary_flux)


def max_speed(f: Field) -> float:
    return float(np.max(np.maximum(np.abs(f.u), np.abs(f.v)) + np.sqrt(f.phi)))


def cfl_timestep(f: Field, cfl: float = DEFAULT_CFL) -> float:
    """``cfl * h / max(|u_n| + c)`` with ``h`` the smaller grid spacing."""
    return cfl * min(f.grid.hx, f.grid.hy) / max_speed(f)


def rk4_step(f: Field, dt: float, tendency) -> Field:
    q = f.q
    k1 = tendency(f)
    k2 = tendency(Field(f.grid, q + 0.5 * dt * k1, f.params))
    k3 = tendency(Field(f.grid, q + 0.5 * dt * k2, f.params))
    k4 = tendency(Field(f.grid, q + dt * k3, f.params))
    return Field(f.grid, q + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), f.params)


def integrate(f0: Field, bcs: dict[str, BCSpec], dt: float, nsteps: int,
              artificial_dissipation: float = 0.0, penalty: float = 1.0, strict: bool = False,
              cfl: float = DEFAULT_CFL, blowup_factor: float = BLOWUP_FACTOR):
    """Advance ``f0`` by ``nsteps`` classical RK4 steps of size ``dt``.

    Returns ``(report, final_field)``. Wall edges have their normal velocity
    zeroed before the first step. Raises :class:`DryState` if ``phi`` leaves
    the admissible set and :class:`Divergence` once the energy exceeds
    ``blowup_factor`` times its initial value; either exception carries the
    partial ``report`` and last good ``field`` as attributes. Regime
    changes are logged, and fatal when ``strict`` is set.
    """
    missing = set(EDGES) - set(bcs)
    if missing:
        raise ValueError(f"no boundary condition for edges {sorted(missing)}")
    limit = cfl_timestep(f0, cfl)
    if dt > limit * (1 + 1e-12):
        warnings.warn(f"dt = {dt:.3e} exceeds the advisory CFL bound {limit:.3e}", stacklevel=2)

    f = project_walls(f0, bcs)
    report = EnergyReport()
    report.record(0.0, f, bcs)
    e0 = report.energy[0]
    if report.mismatches:
        bad = report.mismatches[0][1]
        if strict:
            report.status = "regime_mismatch"
            exc = RegimeMismatch(f"initial boundary regimes differ from configuration: {bad}")
            exc.report, exc.field = report, f
            raise exc
        log.warning("step 0: boundary regimes differ from their configuration: %s", bad)

    def tendency(state: Field) -> np.ndarray:
        return rhs(state, bcs, penalty=penalty, dissipation=artificial_dissipation)

    for step in range(1, nsteps + 1):
        try:
            f_new = rk4_step(f, dt, tendency)
        except DryState as exc:
            report.status = "dry"
            exc.report, exc.field = report, f
            raise
        f = f_new
        n_bad = len(report.mismatches)
        report.record(step * dt, f, bcs)
        if len(report.mismatches) > n_bad:
            _, bad = report.mismatches[-1]
            if n_bad == 0 or report.mismatches[-2][0] != step - 1:
                log.warning("step %d: boundary regimes left their configuration: %s", step, bad)
            if strict:
                report.status = "regime_mismatch"
                exc = RegimeMismatch(f"step {step}: boundary regimes differ from configuration: {bad}")
                exc.report, exc.field = report, f
                raise exc
        e = report.energy[-1]
        if not np.isfinite(e) or e > blowup_factor * e0:
            report.status = "divergence"
            exc = Divergence(f"step {step}: energy {e:.3e} exceeds {blowup_factor:g} x initial {e0:.3e}")
            exc.report, exc.field = report, f
            raise exc
    report.status = "completed"
    return report, f
