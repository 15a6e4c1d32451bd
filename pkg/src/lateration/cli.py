"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .calibration import calibrate, load_calibration_document
from .geometry import AnchorObservation, ObservationSet, Point2D
from .locators import ALGORITHMS, DISPLAY_NAMES, make_locator
from .minmax import Status, TriangularMF
from .solver import SolverConfig
from .spatial import (SpatialErrorGrid, classify, diff, load_scenario, locator_from_block,
                      read_csv, render, sweep, write_csv, write_ppm, to_rgb)
from .traces import (BUILDING_GAMMA, evaluate, format_table, load_calibration_samples, load_trace,
                     save_calibration_samples, save_trace, synthesize_calibration,
                     synthesize_trace)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _floats(text: str, n: int | None = None) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"expected {n} numbers, got {text!r}")
    return vals


def _starts(text: str | None) -> tuple[Point2D, ...]:
    if not text:
        return ()
    return tuple(Point2D(*_floats(chunk, 2)) for chunk in text.split(";") if chunk.strip())


def _models(args) -> dict:
    params = {}
    if getattr(args, "model", None):
        params.update(load_calibration_document(args.model))
    if getattr(args, "mf", None):
        params["mf"] = load_calibration_document(args.mf)["mf"]
    if getattr(args, "mf_params", None):
        try:
            params["mf"] = TriangularMF(*_floats(args.mf_params, 3))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if getattr(args, "eta", None) is not None:
        params["eta"] = args.eta
    return params


def _locator(name: str, args, params: dict):
    solver = SolverConfig(starts=_starts(getattr(args, "starts", None)))
    need = {"mdminmax": "mf", "mle-normal": "normal", "mle-gamma": "gamma"}.get(name)
    if need and need not in params:
        flag = "--mf/--mf-params" if need == "mf" else "--model"
        raise UsageError(f"--algo {name} needs {flag}")
    return make_locator(name, mf=params.get("mf"), normal=params.get("normal"),
                        gamma=params.get("gamma"), eta=params.get("eta"), solver=solver)


def _dump(doc) -> str:
    return json.dumps(doc, separators=(",", ":"))


# ---------------------------------------------------------------------------
# subcommands

def cmd_calibrate(args) -> int:
    samples = load_calibration_samples(args.trace)
    cal = calibrate(samples, args.q_low, args.q_high)
    doc = cal.to_dict()
    if args.out:
        cal.save(args.out)
    print(json.dumps(doc, indent=2))
    return 0


def _read_observations(path) -> ObservationSet:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    items = doc["obs"] if isinstance(doc, dict) else doc
    return ObservationSet(tuple(AnchorObservation(Point2D(*o["a"]), o["r"]) for o in items))


def cmd_locate(args) -> int:
    loc = _locator(args.algo, args, _models(args))
    est = loc.locate(_read_observations(args.obs))
    if est.status is Status.DEGENERATE_FALLBACK:
        print(f"warning: {args.algo} fell back to a degenerate estimate", file=sys.stderr)
    print(_dump({"x": est.x, "y": est.y}))
    return 0


def cmd_sweep(args) -> int:
    scenario, block = load_scenario(args.scenario)
    raw = json.loads(Path(args.scenario).read_text(encoding="utf-8"))
    if args.seed is None and "seed" not in raw:
        raise UsageError("no seed: pass --seed or set 'seed' in the scenario file")
    if args.seed is not None:
        scenario = replace(scenario, seed=args.seed)
    if args.trials is not None:
        scenario = replace(scenario, trials_per_cell=args.trials)
    if args.algo:
        params = _models(args)
        if args.algo == "mdminmax" and "mf" not in params:
            locator = locator_from_block({"name": "mdminmax", "mf": "calibrate"}, scenario)
        else:
            locator = _locator(args.algo, args, params)
    elif block:
        locator = locator_from_block(block, scenario, Path(args.scenario).parent)
    else:
        raise UsageError("no algorithm: pass --algo or add an 'algorithm' block to the scenario")
    grid = sweep(scenario, locator, workers=args.workers)
    base = Path(args.out)
    if base.suffix.lower() in (".csv", ".ppm"):
        base = base.with_suffix("")
    write_csv(grid.mean, base.with_name(base.name + ".csv"))
    write_ppm(to_rgb(classify(grid)), base.with_name(base.name + ".ppm"))
    print(_dump({"algorithm": locator.name, "mean_error": float(grid.mean.mean()),
                 "csv": str(base) + ".csv", "ppm": str(base) + ".ppm"}))
    return 0


def _grid_from_csv(path, scenario) -> SpatialErrorGrid:
    mean = read_csv(path)
    if mean.shape != (scenario.grid_rows, scenario.grid_cols):
        raise ValueError(f"{path}: grid is {mean.shape[0]}x{mean.shape[1]}, scenario expects "
                         f"{scenario.grid_rows}x{scenario.grid_cols}")
    return SpatialErrorGrid(mean, mean * 0, scenario)


def cmd_classify(args) -> int:
    scenario, _ = load_scenario(args.scenario)
    grid = _grid_from_csv(args.grid, scenario)
    ppm, csv = render(classify(grid, args.expected), args.out)
    print(_dump({"ppm": str(ppm), "csv": str(csv)}))
    return 0


def cmd_diff(args) -> int:
    scenario, _ = load_scenario(args.scenario)
    a = _grid_from_csv(args.a, scenario)
    b = _grid_from_csv(args.b, scenario)
    d = diff(a, b, args.threshold)
    ppm, csv = render(d, args.out)
    counts = {k: int((d.classes == v).sum()) for k, v in
              (("equivalent", 0), ("first_better", 1), ("second_better", 2))}
    print(_dump({"ppm": str(ppm), "csv": str(csv), **counts}))
    return 0


def cmd_evaluate(args) -> int:
    trace = load_trace(args.trace)
    params = _models(args)
    names = args.algo or ["all"]
    if "all" in names:
        names = [n for n in ALGORITHMS
                 if {"mdminmax": "mf", "mle-normal": "normal", "mle-gamma": "gamma"}.get(n, "") in params
                 or n in ("minmax", "eminmax-w2", "eminmax-w4", "nlls")]
    rows, doc = [], {}
    for name in names:
        ev = evaluate(trace, _locator(name, args, params))
        rows.append((DISPLAY_NAMES[name], ev.metrics))
        doc[name] = ev.metrics.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(doc, indent=2) if args.json else format_table(rows))
    return 0


def cmd_gen_trace(args) -> int:
    gamma = BUILDING_GAMMA
    if args.model:
        gamma = load_calibration_document(args.model).get("gamma", BUILDING_GAMMA)
    fixes = synthesize_trace(args.fixes, args.seed, gamma)
    save_trace(fixes, args.out)
    out = {"trace": args.out, "fixes": len(fixes)}
    if args.calibration_out:
        # disjoint stream: calibration never shares draws with the trace
        samples = synthesize_calibration(args.calibration_samples, args.seed + 1_000_003, gamma)
        save_calibration_samples(samples, args.calibration_out)
        out["calibration"] = args.calibration_out
    print(_dump(out))
    return 0


# ---------------------------------------------------------------------------

def _add_model_flags(p, solver=True):
    p.add_argument("--mf", help="calibration JSON document supplying the membership function")
    p.add_argument("--mf-params", metavar="LOW,MEDIAN,UP", help="membership function parameters")
    p.add_argument("--model", help="calibration JSON document supplying normal/gamma models")
    p.add_argument("--eta", type=float, help="gamma offset (default: -location of the gamma model)")
    if solver:
        p.add_argument("--starts", metavar="X1,Y1;X2,Y2", help="solver starting points")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lateration", description="Range-based lateration toolkit.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("calibrate", help="fit MF and error models from {r, rbar} lines")
    p.add_argument("--trace", required=True)
    p.add_argument("--q-low", type=float, default=0.005)
    p.add_argument("--q-high", type=float, default=0.995)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("locate", help="estimate one position from an observation file")
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--obs", required=True)
    _add_model_flags(p)
    p.set_defaults(func=cmd_locate)

    p = sub.add_parser("sweep", help="Monte-Carlo spatial error map")
    p.add_argument("--scenario", required=True)
    p.add_argument("--algo", choices=ALGORITHMS)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output base path (writes .csv and .ppm)")
    _add_model_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classify", help="colour a saved error grid")
    p.add_argument("--grid", required=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--expected", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("diff", help="compare two saved error grids")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--threshold", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("evaluate", help="metrics of locators over a recorded trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--algo", action="append", choices=ALGORITHMS + ("all",))
    p.add_argument("--json", action="store_true", help="print JSON instead of the table")
    p.add_argument("--out", help="write the metrics JSON here")
    _add_model_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("gen-trace", help="synthesize a trace with gamma range errors")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fixes", type=int, default=300)
    p.add_argument("--model", help="calibration JSON document supplying the gamma model")
    p.add_argument("--calibration-out")
    p.add_argument("--calibration-samples", type=int, default=5000)
    p.set_defaults(func=cmd_gen_trace)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lateration {args.command}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"lateration {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
