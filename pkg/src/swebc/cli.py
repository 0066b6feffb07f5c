"""Command-line entry point: ``swebc {classify,compare,verify,ellipse,simulate}``.

Exit codes: 0 success, 1 identity check failed, 2 invalid input or
configuration, 3 ambiguous regime, 4 dry state, 5 divergence, 6 regime
mismatch in strict mode.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import bc, verify
from .core import PhysParams, State, UnitNormal
from .errors import AmbiguousRegime, ConfigError, Divergence, DryState, RegimeMismatch, SWEError
from .svg import region_svg

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_AMBIGUOUS = 3
EXIT_DRY = 4
EXIT_DIVERGENCE = 5
EXIT_MISMATCH = 6

SUFFICIENT_ONLY = (
    "not excluded: sufficient condition only. The energy test fails for |theta_in| = 1, "
    "but a normal-mode analysis does not rule these coefficients out."
)

log = logging.getLogger("swebc")


def _die(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--phi", type=float, required=True, help="geopotential g*h (> 0)")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--nx", type=float, required=True, help="outward unit normal, x component")
    p.add_argument("--ny", type=float, required=True, help="outward unit normal, y component")
    p.add_argument("--g", type=float, default=9.81)
    p.add_argument("--f", type=float, default=0.0, help="Coriolis parameter")


def _read_state(args):
    return State(args.phi, args.u, args.v), UnitNormal(args.nx, args.ny), PhysParams(args.g, args.f)


def _comparison(s, n) -> dict:
    cmp = bc.compare_analyses(s, n)
    return {"nonlinear": cmp.nonlinear_count, "linear": cmp.linear_count, "entropy": cmp.entropy_count,
            "tuple": list(cmp.as_tuple())}


def _coefficient_report(regime: bc.Regime, fr: float, coeffs, lam) -> dict:
    spec = bc.build_bc(regime, coeffs, validate=False)
    stable, min_eig = bc.stability_check(spec, lam)
    out = {"coefficients": list(spec.coefficients), "stable": stable, "min_eigenvalue": min_eig}
    if regime is bc.Regime.SubcriticalInflowLowFr:
        out["in_ellipse"] = bc.inflow_ellipse_contains(fr, *coeffs)
        if not stable and abs(abs(coeffs[1]) - 1.0) <= 1e-12:
            out["note"] = SUFFICIENT_ONLY
    elif regime is bc.Regime.SubcriticalOutflowLowFr:
        out["in_ellipse"] = bc.outflow_ellipse_contains(fr, *coeffs)
    return out


def cmd_classify(args) -> int:
    s, n, _ = _read_state(args)
    regime = bc.classify(s, n)
    fr = float(bc.froude(s, n))
    lam = bc.augmented_eigenvalues(s, n)
    report = {
        "regime": regime.value,
        "froude": fr,
        "augmented_eigenvalues": list(lam),
        "required_bc_count": bc.required_bc_count(regime),
        "partition": {"outgoing": list(bc.partition(regime)[0]), "incoming": list(bc.partition(regime)[1])},
        "comparison": _comparison(s, n),
    }
    if args.coefficients is not None:
        if bc.coefficient_count(regime) != len(args.coefficients):
            return _die(EXIT_INPUT, f"{regime.value} takes {bc.coefficient_count(regime)} coefficients")
        report["coefficients"] = _coefficient_report(regime, fr, args.coefficients, lam)
    _emit(report)
    return EXIT_OK


def cmd_compare(args) -> int:
    s, n, _ = _read_state(args)
    regime = bc.classify(s, n)
    _emit({"regime": regime.value, "froude": float(bc.froude(s, n)), **_comparison(s, n)})
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        return _die(EXIT_INPUT, "--trials must be >= 1")
    report = verify.run_identity_suite(trials=args.trials, seed=args.seed)
    _emit(report.as_dict())
    if not report.ok:
        for name in report.failures:
            print(f"FAILED identity {name}: residual {report.residuals[name]:.3e} > {report.tolerance:g}",
                  file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_ellipse(args) -> int:
    if args.format == "csv":
        pts = bc.ellipse_boundary(args.fr, args.kind, args.samples)
        text = "gamma,theta\n" + "".join(f"{g:.17g},{t:.17g}\n" for g, t in pts)
    else:
        text = region_svg(args.fr, args.kind, args.samples)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _write_outputs(cfg, report, field) -> dict:
    from .sim.io import write_energy_csv, write_field_csv

    written = {}
    if cfg.energy_path:
        written["energy"] = str(write_energy_csv(cfg.energy_path, report))
    if cfg.field_path and field is not None:
        written["field"] = str(write_field_csv(cfg.field_path, field))
    return written


def _summary(report, outputs: dict) -> dict:
    e = np.asarray(report.energy)
    return {
        "status": report.status,
        "steps": len(e) - 1,
        "time": report.times[-1],
        "energy_initial": float(e[0]),
        "energy_final": float(e[-1]),
        "energy_max_ratio": float(e.max() / e[0]),
        "max_abs_boundary_flux": float(np.max(np.abs(report.boundary_flux))),
        "mismatch_steps": len(report.mismatches),
        "outputs": outputs,
    }


def cmd_simulate(args) -> int:
    from .sim.config import load_config, load_preset, preset_names
    from .sim.run import integrate

    if args.list_presets:
        print("\n".join(preset_names()))
        return EXIT_OK
    if (args.config is None) == (args.preset is None):
        return _die(EXIT_INPUT, "give exactly one of a config path or --preset")
    try:
        cfg = load_config(args.config) if args.config else load_preset(args.preset)
        if args.steps is not None:
            cfg.steps = args.steps
        if args.energy_out:
            cfg.energy_path = args.energy_out
        if args.field_out:
            cfg.field_path = args.field_out
        if args.strict:
            cfg.strict = True
        f0, bcs, dt = cfg.build()
    except ConfigError as exc:
        return _die(EXIT_INPUT, f"bad config: {exc}")

    try:
        report, field = integrate(f0, bcs, dt, cfg.steps, artificial_dissipation=cfg.dissipation,
                                  penalty=cfg.penalty, strict=cfg.strict, cfl=cfg.cfl)
    except (DryState, Divergence, RegimeMismatch) as exc:
        code = {DryState: EXIT_DRY, Divergence: EXIT_DIVERGENCE, RegimeMismatch: EXIT_MISMATCH}[type(exc)]
        partial = getattr(exc, "report", None)
        if partial is not None:
            _emit(_summary(partial, _write_outputs(cfg, partial, getattr(exc, "field", None))))
        return _die(code, str(exc))
    _emit(_summary(report, _write_outputs(cfg, report, field)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swebc", description="Characteristic boundary conditions for the 2D shallow water equations.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a boundary state and report BC counts")
    _state_flags(p)
    p.add_argument("--coefficients", type=float, nargs="+", metavar="C",
                   help="(gamma, theta) to test against the energy condition")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compare", help="nonlinear / linear / entropy BC counts")
    _state_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="randomised matrix identity checks")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ellipse", help="sample or plot the stable coefficient region")
    p.add_argument("--fr", type=float, required=True, help="Froude number in (0, 1/2)")
    p.add_argument("--kind", choices=("inflow", "outflow"), required=True)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--output", "-o", help="output file (default: stdout)")
    p.set_defaults(func=cmd_ellipse)

    p = sub.add_parser("simulate", help="run the rectangular-domain simulator")
    p.add_argument("config", nargs="?", help="YAML run configuration")
    p.add_argument("--preset", help="use a bundled configuration instead")
    p.add_argument("--list-presets", action="store_true")
    p.add_argument("--steps", type=int)
    p.add_argument("--energy-out")
    p.add_argument("--field-out")
    p.add_argument("--strict", action="store_true", help="abort when a boundary changes regime")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except AmbiguousRegime as exc:
        return _die(EXIT_AMBIGUOUS, f"ambiguous regime: {exc}")
    except (SWEError, ValueError) as exc:
        return _die(EXIT_INPUT, str(exc))


if __name__ == "__main__":
    sys.exit(main())
