"""Command-line surface.

Subcommands::

    holofock connection --model one-mode --alpha 0 --beta 0.5 --mode both
    holofock verify section4
    holofock verify curvature --model one-mode
    holofock holonomy --loop loop.json --mode validated
    holofock synth --target X --budget 5000 --seed 1

Reports are JSON documents (complex numbers as [re, im] pairs) written to
--out together with a flat CSV; figures are rendered alongside unless
--no-plot is given.  Exit codes: 0 pass, 1 check failure, 2 usage or
domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import report as rep
from .connection import (
    ClosedFormSource,
    NumericSource,
    closed_form,
    compare_modes,
    default_space,
    numeric_connection,
)
from .fock import build_space
from .gates import cnot_gate, x_gate
from .holonomy import load_loop, save_loop, transport
from .operators import MODEL_INFO, ParamPoint
from .synthesis import LoopAnsatz, cnot_from_x, synthesize
from .verification import ALIASES, SUITES, run_suite

_MODEL_FLAGS = {
    "one-mode": "one_mode",
    "two-mode": "two_mode",
    "full": "full",
    "extended": "extended",
    "doubled": "doubled",
}


def _complex_flag(value: str) -> complex:
    try:
        return complex(value.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {value!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holofock",
        description="Berry connections, curvatures and holonomic gate loops "
                    "on truncated Fock spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None,
                       help="output directory for report.json/report.csv/figures")
        p.add_argument("--no-plot", action="store_true",
                       help="skip figure rendering")
        p.add_argument("--cutoff", type=int, default=None,
                       help="Fock levels per mode (default 64 one-mode / 24 two-mode)")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
        p.add_argument("--seed", type=int, default=0)

    pc = sub.add_parser("connection", help="connection components at a point")
    common(pc)
    pc.add_argument("--model", choices=sorted(_MODEL_FLAGS), required=True)
    pc.add_argument("--mode", default="validated",
                    choices=["paper", "validated", "numeric", "both"])
    for flag in ("alpha", "beta", "xi", "zeta", "alpha1", "beta1", "alpha2", "beta2"):
        pc.add_argument(f"--{flag}", type=_complex_flag, default=0j)
    for flag in ("s1", "t1", "u", "v", "s2", "t2"):
        pc.add_argument(f"--{flag}", type=float, default=0.0)
    pc.add_argument("--coords", default=None,
                    help="comma-separated complex coordinates (doubled model)")

    pv = sub.add_parser("verify", help="run a named verification suite")
    common(pv)
    pv.add_argument("suite", choices=sorted(SUITES) + sorted(ALIASES) + ["all"])
    pv.add_argument("--model", choices=sorted(_MODEL_FLAGS), default=None,
                    help="accepted for interface compatibility; suites cover "
                         "their models internally")

    ph = sub.add_parser("holonomy", help="transport a loop file")
    common(ph)
    ph.add_argument("--loop", required=True, help="loop JSON file")
    ph.add_argument("--mode", default="validated",
                    choices=["paper", "validated", "numeric"])
    ph.add_argument("--steps", type=int, default=None)
    ph.add_argument("--integrator", default="magnus4",
                    choices=["magnus4", "midpoint"])

    ps = sub.add_parser("synth", help="search a loop for a target gate")
    common(ps)
    ps.add_argument("--target", default="X",
                    help="X, CNOT, or a JSON file with a [re,im] matrix")
    ps.add_argument("--budget", type=int, default=5000)
    ps.add_argument("--harmonics", type=int, default=3)
    ps.add_argument("--amplitude", type=float, default=1.0)
    ps.add_argument("--segments", type=int, default=128)
    ps.add_argument("--model", choices=sorted(_MODEL_FLAGS), default="full")
    ps.add_argument("--mode", default="validated", choices=["paper", "validated"])
    return parser


def _point_from_args(model: str, args) -> ParamPoint:
    info = MODEL_INFO[model]
    if model == "doubled":
        if not args.coords:
            raise SystemExit2("doubled model needs --coords c1,...,c12")
        coords = tuple(_complex_flag(c) for c in args.coords.split(","))
        return ParamPoint(model, coords)
    if model == "one_mode":
        coords = (args.alpha, args.beta)
    elif model == "two_mode":
        coords = (args.xi, args.zeta)
    else:
        coords = (args.alpha1, args.beta1, args.xi, args.zeta,
                  args.alpha2, args.beta2)
    phases = tuple(getattr(args, p) for p in info.phases)
    return ParamPoint(model, coords, phases)


class SystemExit2(SystemExit):
    def __init__(self, msg):  # usage/domain error -> exit code 2
        print(f"error: {msg}", file=sys.stderr)
        super().__init__(2)


def _emit(args, command, config, results, figures):
    doc = {"schema_version": rep.SCHEMA_VERSION, "command": command,
           "config": rep.jsonify(config), "results": rep.jsonify(results)}
    if args.out:
        written = rep.write_report(
            args.out, command, config, results,
            figures=None if args.no_plot else figures,
        )
        doc["written"] = written
        print(json.dumps({"written": written}, indent=1))
    else:
        print(json.dumps(doc, indent=1))


def _cmd_connection(args) -> int:
    model = _MODEL_FLAGS[args.model]
    try:
        point = _point_from_args(model, args)
    except ValueError as exc:
        raise SystemExit2(exc)
    space = default_space(model, args.cutoff)
    results: dict = {"model": model,
                     "point": {"coords": list(point.coords),
                               "phases": list(point.phases)},
                     "cutoff": space.cutoff}
    figures = []
    try:
        if args.mode == "both":
            results["discrepancy"] = compare_modes(
                point, space, tol=args.tol or 1e-5)
            closed = closed_form(point, "validated")
            numeric = numeric_connection(point, space)
            half = numeric_connection(point, build_space(space.modes,
                                                         max(4, space.cutoff // 2)))
            results["components_validated"] = closed.components
            results["components_numeric"] = numeric.components
            results["max_abs_paper_minus_numeric"] = (
                results["discrepancy"]["modes"]["paper"]["max_abs_diff"])
            results["convergence_vs_half_cutoff"] = {
                k: float(np.abs(numeric.components[k] - half.components[k]).max())
                for k in numeric.components
            }
            results["series_branch"] = {
                name: bool(abs(point.coord(name)) < 1e-4)
                for name in MODEL_INFO[model].coords
            }
            shown = closed.components
        elif args.mode == "numeric":
            conn = numeric_connection(point, space)
            half = numeric_connection(point, build_space(space.modes,
                                                         max(4, space.cutoff // 2)))
            results["components"] = conn.components
            results["convergence_vs_half_cutoff"] = {
                k: float(np.abs(conn.components[k] - half.components[k]).max())
                for k in conn.components
            }
            shown = conn.components
        else:
            conn = closed_form(point, args.mode)
            results["components"] = conn.components
            results["series_branch"] = {
                name: bool(abs(point.coord(name)) < 1e-4)
                for name in MODEL_INFO[model].coords
            }
            shown = conn.components
    except ValueError as exc:
        raise SystemExit2(exc)
    figures.append((
        "connection.png",
        rep.matrix_figure({f"A_{k}": np.abs(v) for k, v in shown.items()},
                          f"connection components ({model})"),
    ))
    _emit(args, "connection", vars(args) | {"resolved_model": model}, results, figures)
    return 0


def _cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    suites = []
    for name in names:
        kw = {"seed": args.seed}
        if args.cutoff:
            kw["cutoff"] = args.cutoff
        if args.tol:
            kw["tol"] = args.tol
        suites.append(run_suite(name, **kw))
    results = {"suites": suites,
               "passed": all(s["passed"] for s in suites)}
    all_checks = [c for s in suites for c in s["checks"]]
    figures = [("verify.png", rep.check_figure(all_checks, "verification checks"))]
    _emit(args, "verify", vars(args), results, figures)
    return 0 if results["passed"] else 1


def _cmd_holonomy(args) -> int:
    try:
        loop = load_loop(args.loop)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise SystemExit2(f"cannot read loop file: {exc}")
    model = loop.model
    if args.mode == "numeric":
        source = NumericSource(model, default_space(model, args.cutoff))
    else:
        try:
            source = ClosedFormSource(model, args.mode)
        except ValueError:
            source = NumericSource(model, default_space(model, args.cutoff))
    try:
        res = transport(loop, source, integrator=args.integrator,
                        steps=args.steps,
                        refine_tol=args.tol)
    except (ValueError, RuntimeError) as exc:
        raise SystemExit2(exc)
    results = {
        "model": model,
        "segments": loop.segments,
        "steps_per_segment": res.steps,
        "integrator": res.integrator,
        "unitarity_defect": res.unitarity_defect,
        "holonomy": res.gamma,
        "source": repr(source),
    }
    figures = [("holonomy.png",
                rep.matrix_figure({"|Gamma|": np.abs(res.gamma)}, "holonomy"))]
    _emit(args, "holonomy", vars(args), results, figures)
    return 0


def _cmd_synth(args) -> int:
    model = _MODEL_FLAGS[args.model]
    if args.target.upper() == "X":
        target = x_gate()
    elif args.target.upper() in ("CNOT", "C-NOT"):
        target = cnot_gate()
    else:
        try:
            with open(args.target) as fh:
                raw = json.load(fh)
            target = np.array([[complex(re, im) for re, im in row] for row in raw])
        except (OSError, ValueError, TypeError, json.JSONDecodeError) as exc:
            raise SystemExit2(f"cannot read target: {exc}")
    ansatz = LoopAnsatz(model=model, harmonics=args.harmonics,
                        amplitude=args.amplitude, segments=args.segments)
    if model in ("one_mode",):
        raise SystemExit2("synthesis targets the 4-dimensional fiber; "
                          "use a two-mode model")
    try:
        source = ClosedFormSource(model, args.mode)
    except ValueError:
        source = NumericSource(model, default_space(model, args.cutoff))
    try:
        result = synthesize(target, ansatz, budget=args.budget, seed=args.seed,
                            source=source)
    except ValueError as exc:
        raise SystemExit2(exc)
    conj = cnot_from_x(result, source=source)
    results = {
        "initial_distance": result.initial_distance,
        "best_distance": result.best_distance,
        "evaluations": result.iterations,
        "distance_to_cnot_after_conjugation": conj["distance_to_cnot"],
        "history_non_increasing": bool(
            all(a >= b - 1e-15 for a, b in zip(result.history, result.history[1:]))
        ),
        "coefficients": result.coefficients,
        "history": result.history,
    }
    figures = [
        ("synth_history.png",
         rep.history_figure(result.history, "gate distance (best so far)")),
    ]
    pathgrid = np.array([w.as_real_vector() for w in result.best_loop.waypoints])
    info = MODEL_INFO[model]
    names = [f"{c}:{ax}" for c in info.coords for ax in ("x", "y")] + list(info.phases)
    figures.append(("synth_loop.png",
                    rep.loop_figure(pathgrid, names, "best loop coordinates")))
    if args.out:
        from pathlib import Path

        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        save_loop(result.best_loop, outdir / "best_loop.json")
    _emit(args, "synth", vars(args), results, figures)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "connection":
            return _cmd_connection(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "holonomy":
            return _cmd_holonomy(args)
        if args.command == "synth":
            return _cmd_synth(args)
    except SystemExit2 as exc:
        return exc.code
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
