"""Command-line front end.

Subcommands:

* ``compute``   evaluate divergence tasks from a JSON problem file
* ``verify``    run the randomized identity/inequality suite for one family
* ``geodesic``  emit a divergence profile along a chart segment as CSV

Outputs are deterministic functions of the inputs and flags: numbers are
serialized with shortest round-trip (17 significant digit) representations and
no timestamps or machine identifiers ever appear in the data streams.

Exit codes: 0 success, 1 unreadable/invalid input or flags, 2 domain errors in
otherwise well-formed requests (records still emitted), 3 verification
failures.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import divergences, geodesics, identities
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    DualFlatError,
    UnsupportedError,
)
from .families import DEFAULT_MIXTURE_COMPONENTS, make_family
from .manifold import CoordinatePair, Family, point_from_eta, point_from_theta

__all__ = ["main", "run_compute", "run_geodesic", "run_verify"]

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_DOMAIN = 2
EXIT_VERIFY_FAILED = 3


def _fmt(x: float) -> str:
    """Shortest representation that round-trips a float64."""
    return repr(float(x))


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_json_ready(v) for v in obj]
    return obj


def parse_family_token(token: str) -> Family:
    """Parse the --family flag: kind or kind:config.

    Config forms: ``binomial:10``, ``categorical:4``, ``selfdual:2``,
    ``mixture:[[0.5,0.5],[0.9,0.1]]`` (inline JSON) or ``mixture:table.json``
    (a JSON file holding the component table or {"components": table}).
    Plain ``mixture`` uses the built-in two-component example table.
    """
    kind, _, cfg = token.partition(":")
    if kind == "gaussian1d":
        if cfg:
            raise ConfigError("gaussian1d takes no configuration")
        return make_family("gaussian1d")
    if kind in ("binomial", "categorical", "selfdual"):
        if not cfg:
            raise ConfigError(f"{kind} needs an integer configuration, e.g. {kind}:4")
        try:
            value = int(cfg)
        except ValueError as exc:
            raise ConfigError(f"{kind}: configuration must be an integer, got {cfg!r}") from exc
        key = {"binomial": "trials", "categorical": "outcomes", "selfdual": "dimension"}[kind]
        return make_family(kind, **{key: value})
    if kind == "mixture":
        if not cfg:
            components = DEFAULT_MIXTURE_COMPONENTS
        elif cfg.lstrip().startswith("["):
            components = json.loads(cfg)
        else:
            with open(cfg, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
            components = loaded.get("components", loaded) if isinstance(loaded, dict) else loaded
        return make_family("mixture", components=components)
    raise ConfigError(f"unknown family kind {kind!r}")


def _family_from_object(obj) -> Family:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("family object must be a JSON object with a 'kind' field")
    config = {k: v for k, v in obj.items() if k != "kind"}
    kind = obj["kind"]
    if kind == "mixture" and "components" in config:
        config["components"] = np.asarray(config["components"], dtype=float)
    return make_family(kind, **config)


def _family_echo(family: Family) -> dict:
    echo = {"kind": family.kind}
    if family.kind == "binomial":
        echo["trials"] = family.trials
    elif family.kind == "categorical":
        echo["outcomes"] = family.outcomes
    elif family.kind == "selfdual":
        echo["dimension"] = family.dimension
    elif family.kind == "mixture":
        echo["components"] = [[float(v) for v in row] for row in family.components]
    return echo


def _build_point(family: Family, spec: dict, name: str) -> CoordinatePair:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError(
            f"point {name!r} must be an object with exactly one of 'theta', 'eta', 'params'"
        )
    key, value = next(iter(spec.items()))
    if key == "theta":
        return point_from_theta(family, np.asarray(value, dtype=float))
    if key == "eta":
        return point_from_eta(family, np.asarray(value, dtype=float))
    if key == "params":
        return family.point_from_params(value)
    raise ConfigError(f"point {name!r}: unknown specifier {key!r}")


_TASK_PARAM_KEYS = ("alpha", "a", "b", "side", "chart")


def _run_task(family: Family, points: dict, task: dict) -> tuple[float | None, str, dict]:
    op = task["op"]
    args = [points[name] for name in task["args"]]
    params = {k: task[k] for k in _TASK_PARAM_KEYS if k in task}
    labels = tuple(task["args"])
    if op == "canonical":
        return divergences.canonical(family, *args, labels=labels).value, "ok", params
    if op == "affine":
        return divergences.affine(family, *args, labels=labels).value, "ok", params
    if op == "dual_inner_product":
        q, r, base = args
        return divergences.dual_inner_product(family, q, r, base=base), "ok", params
    if op == "psi_divergence":
        return divergences.psi_divergence(family, *args, alpha=task["alpha"], labels=labels).value, "ok", params
    if op == "phi_divergence":
        return divergences.phi_divergence(family, *args, alpha=task["alpha"], labels=labels).value, "ok", params
    if op == "renyi":
        return divergences.renyi(family, *args, alpha=task["alpha"], labels=labels).value, "ok", params
    if op == "skew_combination":
        side = task.get("side", "theta")
        params["side"] = side
        return divergences.skew_combination(family, *args, a=task["a"], b=task["b"], side=side), "ok", params
    if op == "affine_via_metric_integral" or op == "canonical_via_weighted_integral":
        chart = task.get("chart", "theta")
        params["chart"] = chart
        p, r = args
        start = p.theta if chart == "theta" else p.eta
        end = r.theta if chart == "theta" else r.eta
        spec = geodesics.make_spec(family, p, end - start, chart, 1.0)
        fn = (geodesics.affine_via_metric_integral if op == "affine_via_metric_integral"
              else geodesics.canonical_via_weighted_integral)
        return fn(family, spec), "ok", params
    raise ConfigError(f"unknown op {op!r}")


_KNOWN_OPS = (
    "canonical", "affine", "dual_inner_product", "psi_divergence", "phi_divergence",
    "renyi", "skew_combination", "affine_via_metric_integral",
    "canonical_via_weighted_integral",
)


def _validate_problem(problem) -> None:
    if not isinstance(problem, dict):
        raise ConfigError("problem file must hold a JSON object")
    for field in ("family", "points", "tasks"):
        if field not in problem:
            raise ConfigError(f"problem file is missing the {field!r} field")
    if not isinstance(problem["points"], dict) or not problem["points"]:
        raise ConfigError("'points' must be a non-empty object of named points")
    if not isinstance(problem["tasks"], list):
        raise ConfigError("'tasks' must be a list")
    for idx, task in enumerate(problem["tasks"]):
        if not isinstance(task, dict) or "op" not in task or "args" not in task:
            raise ConfigError(f"task {idx}: needs 'op' and 'args' fields")
        if task["op"] not in _KNOWN_OPS:
            raise ConfigError(f"task {idx}: unknown op {task['op']!r}")
        for name in task["args"]:
            if name not in problem["points"]:
                raise ConfigError(f"task {idx}: undefined point {name!r}")


def run_compute(problem_path: str, output_format: str = "json", out=None) -> int:
    """Evaluate the tasks of a problem file; exit 2 if any record is not ok."""
    out = out or sys.stdout
    try:
        with open(problem_path, "r", encoding="utf-8") as fh:
            problem = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read problem file: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except json.JSONDecodeError as exc:
        print(f"error: problem file is not valid JSON (line {exc.lineno}, column {exc.colno})",
              file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        _validate_problem(problem)
        family = _family_from_object(problem["family"])
    except (ConfigError, DualFlatError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    points: dict[str, CoordinatePair | DualFlatError] = {}
    for name, spec in problem["points"].items():
        try:
            points[name] = _build_point(family, spec, name)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT
        except (DomainError, ConvergenceError) as exc:
            points[name] = exc

    records = []
    any_failure = False
    for task in problem["tasks"]:
        bad = [n for n in task["args"] if isinstance(points[n], DualFlatError)]
        params = {k: task[k] for k in _TASK_PARAM_KEYS if k in task}
        if bad:
            status = "domain_error"
            value = None
        else:
            try:
                value, status, params = _run_task(family, points, task)
            except (DomainError, ConvergenceError):
                value, status = None, "domain_error"
            except UnsupportedError:
                value, status = None, "unsupported"
            except ConfigError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_BAD_INPUT
        any_failure = any_failure or status != "ok"
        records.append({
            "op": task["op"],
            "args": list(task["args"]),
            "parameters": params,
            "value": value,
            "status": status,
        })

    if output_format == "json":
        payload = {
            "family": _family_echo(family),
            "points": {
                name: ({"theta": [float(v) for v in p.theta],
                        "eta": [float(v) for v in p.eta],
                        "psi": p.psi, "phi": p.phi}
                       if isinstance(p, CoordinatePair) else {"error": str(p)})
                for name, p in points.items()
            },
            "results": records,
        }
        json.dump(_json_ready(payload), out, indent=2)
        out.write("\n")
    else:
        out.write("op,args,parameters,value,status\n")
        for rec in records:
            args = ";".join(rec["args"])
            params = ";".join(f"{k}={_fmt(v) if isinstance(v, float) else v}"
                              for k, v in sorted(rec["parameters"].items()))
            value = _fmt(rec["value"]) if rec["value"] is not None else ""
            out.write(f"{rec['op']},{args},{params},{value},{rec['status']}\n")
    return EXIT_DOMAIN if any_failure else EXIT_OK


def _verify_table(family: Family, config: identities.SampleConfig,
                  reports: list[identities.ResidualReport], out) -> None:
    out.write(f"family: {family.label}\n")
    out.write(f"seed: {config.seed}  samples: {config.samples}  "
              f"quadrature samples: {config.quadrature_samples}\n")
    header = f"{'identity':<28} {'samples':>7}  {'statistic':>24}  {'tolerance':>10}  result\n"
    out.write(header)
    out.write("-" * len(header) + "\n")
    for rep in reports:
        if rep.min_slack is not None:
            stat = f"min slack {rep.min_slack:.6e}"
        else:
            stat = f"max rel {rep.max_rel_residual:.6e}"
        out.write(f"{rep.name:<28} {rep.samples:>7}  {stat:>24}  {rep.tolerance:>10.1e}  "
                  f"{'pass' if rep.passed else 'FAIL'}\n")


def run_verify(family: Family, config: identities.SampleConfig,
               output_format: str = "table", out=None) -> int:
    """Run the verification suite; exit 0 when every report passes, 3 otherwise."""
    out = out or sys.stdout
    reports = identities.run_all(family, config)
    if output_format == "json":
        payload = {
            "family": _family_echo(family),
            "seed": config.seed,
            "samples": config.samples,
            "quadrature_samples": config.quadrature_samples,
            "reports": [
                {
                    "name": r.name,
                    "samples": r.samples,
                    "max_abs_residual": r.max_abs_residual,
                    "max_rel_residual": r.max_rel_residual,
                    "min_slack": r.min_slack,
                    "tolerance": r.tolerance,
                    "passed": r.passed,
                    "worst_case": r.worst_case,
                }
                for r in reports
            ],
        }
        json.dump(_json_ready(payload), out, indent=2)
        out.write("\n")
    else:
        _verify_table(family, config, reports, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def run_geodesic(family: Family, p: CoordinatePair, r: CoordinatePair, chart: str,
                 grid: int, out=None) -> int:
    """Write the divergence profile of the chart segment P -> R as CSV."""
    out = out or sys.stdout
    profile = geodesics.divergence_profile(family, p, r, chart, grid)
    n = family.dimension
    header = ["t"]
    header += [f"theta_{i + 1}" for i in range(n)]
    header += [f"eta_{i + 1}" for i in range(n)]
    header += ["canonical", "affine"]
    out.write(",".join(header) + "\n")
    for i in range(len(profile.ts)):
        row = [_fmt(profile.ts[i])]
        row += [_fmt(v) for v in profile.thetas[i]]
        row += [_fmt(v) for v in profile.etas[i]]
        row += [_fmt(profile.canonical[i]), _fmt(profile.affine[i])]
        out.write(",".join(row) + "\n")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualflat",
        description="Dually flat manifolds: divergences, geodesics, and identity verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="evaluate divergence tasks from a JSON problem file")
    p_compute.add_argument("problem", help="path to the problem JSON file")
    p_compute.add_argument("--format", choices=("json", "csv"), default="json")

    p_verify = sub.add_parser("verify", help="run the randomized identity suite for one family")
    p_verify.add_argument("--family", required=True, help="kind[:config], e.g. binomial:10")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--samples", type=int, default=200)
    p_verify.add_argument("--tol-closed", type=float, default=1e-9)
    p_verify.add_argument("--tol-quad", type=float, default=1e-6)
    p_verify.add_argument("--format", choices=("table", "json"), default="table")

    p_geo = sub.add_parser("geodesic", help="emit a divergence profile along a chart segment")
    p_geo.add_argument("--family", required=True, help="kind[:config]")
    p_geo.add_argument("--from", dest="from_point", required=True,
                       help='JSON point, e.g. {"params": {"mu": 0, "sigma": 1}}')
    p_geo.add_argument("--to", dest="to_point", required=True, help="JSON point")
    p_geo.add_argument("--chart", choices=("theta", "eta"), default="theta")
    p_geo.add_argument("--grid", type=int, default=101)
    p_geo.add_argument("--output", default="-", help="output path, '-' for stdout")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK

    if args.command == "compute":
        return run_compute(args.problem, args.format)

    if args.command == "verify":
        try:
            family = parse_family_token(args.family)
            config = identities.SampleConfig(
                seed=args.seed,
                samples=args.samples,
                tol_closed=args.tol_closed,
                tol_quad=args.tol_quad,
            )
        except (ConfigError, OSError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT
        return run_verify(family, config, args.format)

    if args.command == "geodesic":
        try:
            family = parse_family_token(args.family)
            p = _build_point(family, json.loads(args.from_point), "from")
            r = _build_point(family, json.loads(args.to_point), "to")
        except (DomainError, ConvergenceError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        except (ConfigError, OSError, json.JSONDecodeError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT
        try:
            if args.output == "-":
                return run_geodesic(family, p, r, args.chart, args.grid)
            with open(args.output, "w", encoding="utf-8") as fh:
                return run_geodesic(family, p, r, args.chart, args.grid, out=fh)
        except (DomainError, ConvergenceError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT

    return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
