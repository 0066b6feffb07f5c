"""Run configuration for the simulator, read from a YAML document.

Example::

    domain:   {a: 1.0, b: 1.0, nx: 32, ny: 32}
    physics:  {g: 1.0, f: 0.0}
    initial:  {preset: rest_bump, phi0: 1.0, amplitude: 0.1, width: 0.1}
    time:     {steps: 200, cfl: 0.4, dissipation: 0.0}
    boundary:
      left:   {regime: Wall}
      right:  {regime: SubcriticalOutflowLowFr, coefficients: [0.0, 0.0], data: initial}
      bottom: {regime: Wall}
      top:    {regime: Wall}
    output:   {energy: energy.csv, field: field.csv}
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from ..bc import (
    BCSpec,
    Regime,
    build_bc,
    classify_nodes,
    coefficient_count,
    froude,
    inflow_ellipse_contains,
    outflow_ellipse_contains,
)
from ..core import PhysParams
from ..errors import ConfigError, SWEError
from .grid import EDGE_NORMALS, EDGES, PRESETS, Field, initial_field, make_grid
from .run import DEFAULT_CFL, cfl_timestep
from .scheme import incoming_residuals, project_walls

log = logging.getLogger(__name__)

SECTIONS = {"domain", "physics", "initial", "time", "boundary", "output"}
DATA_POLICIES = ("zero", "initial")
_KEYS = {
    "domain": {"a", "b", "nx", "ny"},
    "physics": {"g", "f"},
    "initial": {"preset", "phi0", "u0", "v0", "amplitude", "width", "x0", "y0"},
    "time": {"steps", "dt", "cfl", "dissipation", "penalty", "strict"},
    "edge": {"regime", "coefficients", "data", "validate"},
    "output": {"energy", "field"},
}


@dataclass
class EdgeConfig:
    regime: Regime
    coefficients: tuple[float, ...] = ()
    data: str | list = "zero"
    validate: bool = True


@dataclass
class RunConfig:
    """Validated contents of a run configuration document."""

    a: float = 1.0
    b: float = 1.0
    nx: int = 32
    ny: int = 32
    g: float = 1.0
    f: float = 0.0
    initial: dict = field(default_factory=lambda: {"preset": "rest_bump"})
    steps: int = 200
    dt: float | None = None
    cfl: float = DEFAULT_CFL
    dissipation: float = 0.0
    penalty: float = 1.0
    strict: bool = False
    edges: dict[str, EdgeConfig] = field(default_factory=dict)
    energy_path: str | None = "energy.csv"
    field_path: str | None = "field.csv"

    def params(self) -> PhysParams:
        return PhysParams(g=self.g, f=self.f)

    def build(self) -> tuple[Field, dict[str, BCSpec], float]:
        """Initial field, per-edge boundary specs and time step.

        Raises :class:`ConfigError` for anything that would make the run
        meaningless before it starts.
        """
        try:
            grid = make_grid(self.a, self.b, self.nx, self.ny)
            params = self.params()
            f0 = initial_field(grid, params, **self.initial)
        except (SWEError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

        provisional = {e: build_bc(c.regime, c.coefficients, validate=False) for e, c in self.edges.items()}
        f0 = project_walls(f0, provisional)
        bcs = {e: _edge_spec(e, c, f0, provisional[e]) for e, c in self.edges.items()}
        dt = self.dt if self.dt is not None else cfl_timestep(f0, self.cfl)
        return f0, bcs, dt


def _edge_spec(edge: str, cfg: EdgeConfig, f0: Field, bc: BCSpec) -> BCSpec:
    s = f0.edge_state(edge)
    n = EDGE_NORMALS[edge]
    found = classify_nodes(s, n)
    off = sorted({"Ambiguous" if r is None else r.value for r in found if r is not cfg.regime})
    if off:
        msg = f"{edge}: initial boundary regimes {off} differ from configured {cfg.regime.value}"
        if cfg.validate:
            raise ConfigError(msg + " (set validate: false to run anyway)")
        log.warning(msg)

    if cfg.validate and coefficient_count(cfg.regime):
        gamma, theta = cfg.coefficients
        contains = (
            inflow_ellipse_contains if cfg.regime is Regime.SubcriticalInflowLowFr else outflow_ellipse_contains
        )
        for fr in np.unique(np.asarray(froude(s, n))):
            if not contains(fr, gamma, theta):
                raise ConfigError(
                    f"{edge}: coefficients ({gamma}, {theta}) lie outside the stable region at Fr = {fr:.6g}"
                )

    n_in = len(bc.incoming)
    if isinstance(cfg.data, str):
        data = np.zeros(n_in) if cfg.data == "zero" else incoming_residuals(f0, edge, bc)
    else:
        data = np.asarray(cfg.data, dtype=float)
        if data.shape != (n_in,):
            raise ConfigError(f"{edge}: data must list {n_in} values for {cfg.regime.value}, got {cfg.data}")
    return bc.with_external_data(data)


def _section(doc: dict, name: str) -> dict:
    sec = doc.get(name) or {}
    if not isinstance(sec, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    key = "edge" if name in EDGES else name
    unknown = set(sec) - _KEYS[key]
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(unknown)}")
    return sec


def _number(sec: dict, key: str, default, kind=float):
    value = sec.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return int(value)
    return float(value)


def _edge(name: str, sec: dict) -> EdgeConfig:
    if "regime" not in sec:
        raise ConfigError(f"boundary.{name} needs a regime")
    try:
        regime = Regime(sec["regime"])
    except ValueError:
        raise ConfigError(
            f"boundary.{name}: unknown regime {sec['regime']!r}; choose from {[r.value for r in Regime]}"
        ) from None
    coeffs = sec.get("coefficients") or []
    if not isinstance(coeffs, list) or not all(isinstance(x, (int, float)) for x in coeffs):
        raise ConfigError(f"boundary.{name}: coefficients must be a list of numbers")
    if len(coeffs) != coefficient_count(regime):
        raise ConfigError(
            f"boundary.{name}: {regime.value} takes {coefficient_count(regime)} coefficients, got {len(coeffs)}"
        )
    data = sec.get("data", "zero")
    if isinstance(data, str) and data not in DATA_POLICIES:
        raise ConfigError(f"boundary.{name}: data must be one of {DATA_POLICIES} or a list")
    validate = sec.get("validate", True)
    if not isinstance(validate, bool):
        raise ConfigError(f"boundary.{name}: validate must be true or false")
    return EdgeConfig(regime, tuple(float(x) for x in coeffs), data, validate)


def parse_config(doc) -> RunConfig:
    """Check a parsed document and turn it into a :class:`RunConfig`."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping")
    unknown = set(doc) - SECTIONS
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")

    dom = _section(doc, "domain")
    phys = _section(doc, "physics")
    init = dict(_section(doc, "initial"))
    tim = _section(doc, "time")
    out = _section(doc, "output")

    init.setdefault("preset", "rest_bump")
    if init["preset"] not in PRESETS:
        raise ConfigError(f"unknown initial preset {init['preset']!r}; choose from {PRESETS}")
    for key in set(init) - {"preset"}:
        init[key] = _number(init, key, None)

    bnd = doc.get("boundary")
    if not isinstance(bnd, dict):
        raise ConfigError("section 'boundary' must map every edge to a regime")
    missing = [e for e in EDGES if e not in bnd]
    extra = sorted(set(bnd) - set(EDGES))
    if missing or extra:
        raise ConfigError(f"boundary must list exactly {list(EDGES)}; missing {missing}, unexpected {extra}")

    cfg = RunConfig(
        a=_number(dom, "a", 1.0),
        b=_number(dom, "b", 1.0),
        nx=_number(dom, "nx", 32, int),
        ny=_number(dom, "ny", 32, int),
        g=_number(phys, "g", 1.0),
        f=_number(phys, "f", 0.0),
        initial=init,
        steps=_number(tim, "steps", 200, int),
        dt=_number(tim, "dt", None),
        cfl=_number(tim, "cfl", DEFAULT_CFL),
        dissipation=_number(tim, "dissipation", 0.0),
        penalty=_number(tim, "penalty", 1.0),
        strict=bool(tim.get("strict", False)),
        edges={e: _edge(e, _section(bnd, e)) for e in EDGES},
        energy_path=out.get("energy", "energy.csv"),
        field_path=out.get("field", "field.csv"),
    )
    if cfg.g <= 0:
        raise ConfigError("physics.g must be positive")
    if cfg.steps < 0:
        raise ConfigError("time.steps must be non-negative")
    if cfg.dt is not None and cfg.dt <= 0:
        raise ConfigError("time.dt must be positive")
    if cfg.cfl <= 0 or cfg.dissipation < 0 or cfg.penalty <= 0:
        raise ConfigError("time.cfl and time.penalty must be positive, time.dissipation non-negative")
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return parse_config(doc)


def preset_names() -> list[str]:
    root = resources.files("swebc") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def preset_text(name: str) -> str:
    p = resources.files("swebc") / "presets" / f"{name}.yaml"
    if not p.is_file():
        raise ConfigError(f"unknown preset {name!r}; available: {preset_names()}")
    return p.read_text()


def load_preset(name: str) -> RunConfig:
    return parse_config(yaml.safe_load(preset_text(name)))
