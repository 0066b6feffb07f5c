"""Desk-scale 2D shallow water simulator with weak characteristic boundary conditions."""

from .grid import EDGE_NORMALS, EDGES, Field, Grid, initial_field, make_grid
from .run import EnergyReport, cfl_timestep, integrate
from .scheme import boundary_flux_audit, energy_norm, energy_rate, rhs

__all__ = [
    "EDGES",
    "EDGE_NORMALS",
    "EnergyReport",
    "Field",
    "Grid",
    "boundary_flux_audit",
    "cfl_timestep",
    "energy_norm",
    "energy_rate",
    "initial_field",
    "integrate",
    "make_grid",
    "rhs",
]
