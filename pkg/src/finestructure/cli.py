"""Command-line driver: `finestructure run` for the battery, `finestructure apply` for user operators."""
from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone

from .battery import (
    REGISTRY,
    SCHEMA_VERSION,
    BatteryConfig,
    ConfigError,
    report_csv,
    report_json,
    run_battery,
)
from .operators import (
    CALCULI,
    DEFAULT_NODES,
    CommutingParavectorOp,
    ContourSpec,
    DegreeError,
    EnclosureError,
    HypothesisError,
    SideMismatchError,
    SpectralProximityError,
    SlicePolynomial,
    check_hypotheses,
    contour_calculus,
    contour_invariance_check,
)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _run_parser(sub) -> None:
    p = sub.add_parser("run", help="run the verification battery (default)")
    p.add_argument("--config", help="JSON file with battery settings; flags override it")
    p.add_argument("--n", type=int, nargs="+", help="algebra dimensions to test (3, 5, 7)")
    p.add_argument("--seed", type=int)
    p.add_argument("--checks", action="append", metavar="GLOB", help="check id glob, repeatable")
    p.add_argument("--tol-scale", type=float, help="multiply every tolerance")
    p.add_argument("--nodes", type=int, help="trapezoid nodes per contour")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--jobs", type=int, help="worker threads for independent checks")
    p.add_argument("--list-checks", action="store_true", help="print check ids and exit")


def _apply_parser(sub) -> None:
    p = sub.add_parser("apply", help="apply one functional calculus to a user operator")
    p.add_argument("--calc", required=True, choices=CALCULI)
    p.add_argument("--param", type=int, help="ell or alpha for the parametrized calculi")
    p.add_argument("--operator", required=True, help='JSON {"n", "d", "components"}')
    p.add_argument("--poly", required=True, help='JSON {"n", "side", "coefficients"}')
    p.add_argument("--contour", help='JSON {"center", "radius", "slice_unit", "nodes"}; default encloses the spectrum')
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES, help="nodes for the default contour")
    p.add_argument("--out", help="write the dump here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finestructure",
        description="Verification battery and contour calculi for Clifford fine structures.",
    )
    sub = parser.add_subparsers(dest="command")
    _run_parser(sub)
    _apply_parser(sub)
    return parser


def _config_from_args(args) -> BatteryConfig:
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = BatteryConfig.from_json_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    else:
        cfg = BatteryConfig()
    for name in ("n", "seed", "tol_scale", "nodes", "out", "format", "jobs", "checks"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    cfg.validate()
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    if args.list_checks:
        for cid, check in REGISTRY.items():
            print(f"{cid:36s} {check.description}")
        return EXIT_PASS
    cfg = _config_from_args(args)
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    t0 = time.perf_counter()
    results, status = run_battery(cfg)
    timing = {
        "started": started,
        "elapsed_seconds": round(time.perf_counter() - t0, 3),
        "wall_time": {f"{r.check_id}@{r.n}": round(r.wall_time, 4) for r in results},
    }
    text = report_json(cfg, results, timing) if cfg.format == "json" else report_csv(results)
    _emit(text, cfg.out)
    counts = {k: sum(r.status == k for r in results) for k in ("pass", "fail", "skip")}
    print(f"{counts['pass']} pass, {counts['fail']} fail, {counts['skip']} skip", file=sys.stderr)
    for r in results:
        if r.status == "fail":
            print(f"FAIL {r.check_id} n={r.n} {json.dumps(r.params)} defect={r.defect:.3e} tol={r.tolerance:.1e}",
                  file=sys.stderr)
    return EXIT_FAIL if status else EXIT_PASS


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {what} file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} file line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def apply_calculus(calc: str, operator: dict, poly: dict, contour: dict | None, param=None,
                   nodes: int = DEFAULT_NODES) -> dict:
    """Evaluate a calculus on JSON inputs and return the dump with its invariance delta."""
    try:
        T = CommutingParavectorOp.from_json(operator)
        f = SlicePolynomial.from_json(poly)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed input: missing or invalid field {exc}") from None
    if f.n != T.n:
        raise ConfigError(f"polynomial lives in R_{f.n} but the operator in R_{T.n}")
    check_hypotheses(calc, T)
    spec = ContourSpec.from_json(contour) if contour else ContourSpec.around(T, nodes)
    result = contour_calculus(calc, f, T, spec, param)
    delta = contour_invariance_check(calc, f, T, spec, param)
    return {
        "schema": SCHEMA_VERSION,
        "calc": calc,
        "param": param,
        "n": T.n,
        "d": T.d,
        "side": f.side,
        "blades": [T.alg.blade_name(i) for i in range(T.alg.dim)],
        "contour": {"center": spec.center, "radius": spec.radius,
                    "slice_unit": list(spec.unit_vector(T.n)), "nodes": spec.nodes},
        "result": result.coeffs.tolist(),
        "invariance_delta": delta,
    }


def cmd_apply(args) -> int:
    operator = _load_json(args.operator, "operator")
    poly = _load_json(args.poly, "polynomial")
    contour = _load_json(args.contour, "contour") if args.contour else None
    dump = apply_calculus(args.calc, operator, poly, contour, args.param, args.nodes)
    _emit(json.dumps(dump, indent=2) + "\n", args.out)
    return EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in ("run", "apply", "-h", "--help"):
        argv = ["run", *argv]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already; keep 0 for --help
        return int(exc.code or 0)
    try:
        return cmd_run(args) if args.command == "run" else cmd_apply(args)
    except (ConfigError, HypothesisError, EnclosureError, SideMismatchError,
            SpectralProximityError, DegreeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
