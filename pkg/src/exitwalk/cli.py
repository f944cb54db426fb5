"""Command line interface.

Exit codes: 0 = success, 1 = an audit or verification found violations
(details on stdout), 2 = invalid input or an operational error (a JSON error
object on stdout).  All rationals are printed as "p/q" strings; output for
identical inputs and flags is byte-identical.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import ConstructionFailure
from .fixtures import (
    random_alpha_start,
    random_model,
    random_region,
)
from .injection import (
    InjectionInstance,
    PathPair,
    phi_forward,
    verify_injection,
)
from .lattice import LatticePath, LatticePoint, Region
from .mc import SimulationResult, compare_empirical, simulate
from .paths import MODE_STEPS, ballot, binomial, count_paths_through, delannoy
from .svgtrace import render_trace
from .walker import (
    ExitDistribution,
    Strip,
    TransitionModel,
    exact_exit_distribution,
    ladder_strip,
    log_concavity_check,
    monotone_crossing_distribution,
    truncated_strip_distribution,
)


def _load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(data, out: str | None):
    text = json.dumps(data, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _emit_csv(rows: list[tuple], header: tuple, out: str | None):
    lines = [",".join(header)]
    lines.extend(",".join(str(c) for c in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _parse_point(text: str) -> LatticePoint:
    try:
        x, y = text.split(",")
        return LatticePoint(int(x), int(y))
    except ValueError as err:
        raise ValueError(f"expected a point as 'x,y', got {text!r}") from err


def _region_from_file(path: str) -> Region:
    return Region.from_json(_load(path))


def _lc_json(report) -> dict:
    return {
        "stride": report.stride,
        "checked": report.checked,
        "passed": report.passed,
        "violations": [
            {"k": k, "square": str(lhs), "neighbors": str(rhs)}
            for k, lhs, rhs in report.violations
        ],
    }


# -- subcommand handlers ---------------------------------------------------


def cmd_region_validate(args) -> int:
    region = _region_from_file(args.region)
    _emit(
        {"ok": True, "m": region.m, "columns": [list(c) for c in region.columns],
         "step_set": region.step_set.kind},
        args.out,
    )
    return 0


def cmd_exact_solve(args) -> int:
    region = _region_from_file(args.region)
    model = TransitionModel.from_json(_load(args.model))
    start = _parse_point(args.start)
    dist = exact_exit_distribution(region, model, start)
    if args.format == "csv":
        rows = [(k, str(v)) for k, v in sorted(dist.probabilities.items())]
        rows.append(("kill", str(dist.kill_mass)))
        _emit_csv(rows, ("k", "probability"), args.out)
    else:
        data = dist.to_json()
        data["total_mass"] = str(dist.total_mass)
        _emit(data, args.out)
    return 0


def cmd_exact_audit(args) -> int:
    rng = random.Random(args.seed)
    failures = []
    for index in range(args.fixtures):
        region = random_region(rng)
        if args.random_models:
            model = random_model(rng, region.m)
        else:
            model = TransitionModel.uniform(region.m)
        start = random_alpha_start(rng, region)
        dist = exact_exit_distribution(region, model, start)
        report = log_concavity_check(dist.probabilities)
        if not report.passed:
            failures.append(
                {
                    "fixture": index,
                    "region": region.to_json(),
                    "model": model.to_json(),
                    "start": [start.x, start.y],
                    "log_concavity": _lc_json(report),
                }
            )
    _emit(
        {
            "fixtures": args.fixtures,
            "models": "random" if args.random_models else "uniform",
            "seed": args.seed,
            "violations": failures,
            "passed": not failures,
        },
        args.out,
    )
    return 1 if failures else 0


def cmd_strip_solve(args) -> int:
    if args.ladder:
        strip, start = ladder_strip()
    else:
        if not args.strip:
            raise ValueError("need --ladder or --strip FILE")
        strip = Strip.from_json(_load(args.strip))
        start = _parse_point(args.start) if args.start else LatticePoint(0, 0)
    result = truncated_strip_distribution(
        strip, start, args.tol, args.initial_height, args.max_height
    )
    probs = result.probabilities
    if args.kmax is not None:
        probs = {k: v for k, v in probs.items() if abs(k) <= args.kmax}
    if args.format == "csv":
        rows = [(k, repr(v), repr(result.error_bound)) for k, v in sorted(probs.items())]
        _emit_csv(rows, ("k", "probability", "bound"), args.out)
    else:
        _emit(
            {
                "height": result.height,
                "error_bound": result.error_bound,
                "probabilities": {str(k): v for k, v in sorted(probs.items())},
            },
            args.out,
        )
    return 0


def _report_json(report) -> dict:
    data = report.summary()
    data["duplicate_details"] = [
        {
            "image": image.to_json(),
            "sources": [p.to_json() for p in sources],
        }
        for image, sources in report.duplicates
    ]
    data["construction_failure_details"] = [
        {"pair": pair.to_json(), "stage": err.stage, "reason": err.reason}
        for pair, err in report.construction_failures
    ]
    data["codomain_violation_details"] = [
        {"pair": pair.to_json(), "image": image.to_json(), "reason": reason}
        for pair, image, reason in report.codomain_violations
    ]
    return data


def cmd_inject_verify(args) -> int:
    region = _region_from_file(args.region)
    instance = InjectionInstance.from_json(region, _load(args.instance))
    report = verify_injection(instance, args.bound, check_roundtrip=not args.no_roundtrip)
    data = _report_json(report)
    _emit(data, args.out)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
    return 0 if report.passed else 1


def cmd_inject_trace(args) -> int:
    payload = _load(args.pair)
    region = Region.from_json(payload["region"])
    instance = InjectionInstance.from_json(region, payload["instance"])
    pair = PathPair(
        LatticePath.from_json(payload["first"]),
        LatticePath.from_json(payload["second"]),
    )
    try:
        image, trace = phi_forward(instance, pair)
    except ConstructionFailure as err:
        _emit(
            {"error": {"type": "ConstructionFailure", "stage": err.stage,
                       "message": err.reason}},
            args.out,
        )
        return 1
    if args.svg:
        svg = render_trace(instance, pair, image, trace)
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg)
    _emit(
        {
            "image": image.to_json(),
            "shift": trace.shift,
            "junction": list(trace.junction),
            "junction_indices": [trace.junction_first_index, trace.junction_second_index],
            "fallback_used": trace.fallback_used,
            "repair_rounds": trace.repair_rounds,
            "svg": args.svg,
        },
        args.out,
    )
    return 0


def cmd_count(args) -> int:
    region = _region_from_file(args.region)
    frm = _parse_point(args.frm) if args.frm else LatticePoint(0, region.lo(0))
    to = _parse_point(args.to) if args.to else LatticePoint(region.m, region.hi(region.m))
    counts = count_paths_through(region, args.mode, frm, to, args.column)
    stride = 2 if args.mode in ("dyck", "schroder") else 1
    report = log_concavity_check(
        {k: v for k, v in counts.items() if k % stride == (frm.x + frm.y + args.column) % stride}
        if stride == 2
        else counts,
        stride=stride,
    )
    if args.format == "csv":
        rows = [(k, v) for k, v in sorted(counts.items())]
        _emit_csv(rows, ("k", "count"), args.out)
    else:
        _emit(
            {
                "mode": args.mode,
                "from": [frm.x, frm.y],
                "to": [to.x, to.y],
                "column": args.column,
                "counts": {str(k): v for k, v in sorted(counts.items())},
                "log_concavity": _lc_json(report),
            },
            args.out,
        )
    return 0


def cmd_famous(args) -> int:
    n = args.n
    if args.family == "delannoy":
        values = {k: delannoy(k, n - k) for k in range(n + 1)}
    elif args.family == "ballot":
        values = {k: ballot(n, k) for k in range((n + 1) // 2, n + 1)}
    else:
        values = {k: binomial(n, k) for k in range(n + 1)}
    report = log_concavity_check(values)
    bad = {k for k, _, _ in report.violations}
    rows = [(k, v, 0 if k in bad else 1) for k, v in sorted(values.items())]
    _emit_csv(rows, ("k", "value", "lc_ok"), args.out)
    return 1 if bad else 0


def cmd_mc_run(args) -> int:
    region = _region_from_file(args.region)
    model = TransitionModel.from_json(_load(args.model))
    start = _parse_point(args.start)
    result = simulate(
        region,
        model,
        start,
        trajectories=args.n,
        seed=args.seed,
        max_steps=args.max_steps,
        threads=args.threads,
    )
    _emit(result.to_json(), args.out)
    return 0


def cmd_mc_compare(args) -> int:
    exact = ExitDistribution.from_json(_load(args.exact))
    sim = SimulationResult.from_json(_load(args.sim))
    report = compare_empirical(exact, sim)
    report["z_scores"] = {str(k): v for k, v in sorted(report["z_scores"].items())}
    report["flagged"] = [str(k) for k in report["flagged"]]
    report["support_mismatch"] = [str(k) for k in report["support_mismatch"]]
    _emit(report, args.out)
    return 1 if report["flagged"] or report["support_mismatch"] else 0


def cmd_crossing(args) -> int:
    region = _region_from_file(args.region)
    model = TransitionModel.from_json(_load(args.model))
    start = _parse_point(args.start)
    target = _parse_point(args.target)
    dist = monotone_crossing_distribution(region, model, start, target, args.column)
    report = log_concavity_check(dist)
    if args.format == "csv":
        rows = [(k, str(v)) for k, v in sorted(dist.items())]
        _emit_csv(rows, ("k", "probability"), args.out)
    else:
        _emit(
            {
                "column": args.column,
                "probabilities": {str(k): str(v) for k, v in sorted(dist.items())},
                "log_concavity": _lc_json(report),
            },
            args.out,
        )
    return 0


# -- parser ----------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--out", help="also write the output to this file")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exitwalk",
        description="Exact exit laws of killed lattice walks, path-pair "
        "suffix-swap verification, and log-concavity audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    region = sub.add_parser("region", help="region utilities").add_subparsers(
        dest="sub", required=True
    )
    rv = region.add_parser("validate", help="validate a region file")
    rv.add_argument("--region", required=True)
    rv.add_argument("--out")
    rv.set_defaults(func=cmd_region_validate)

    exact = sub.add_parser("exact", help="exact exit laws").add_subparsers(
        dest="sub", required=True
    )
    es = exact.add_parser("solve", help="solve one region/model/start exactly")
    es.add_argument("--region", required=True)
    es.add_argument("--model", required=True)
    es.add_argument("--start", required=True, help="start point as 'x,y'")
    _add_common(es)
    es.set_defaults(func=cmd_exact_solve)
    ea = exact.add_parser("audit", help="log-concavity audit over random fixtures")
    ea.add_argument("--fixtures", type=int, default=100)
    ea.add_argument("--seed", type=int, default=0)
    ea.add_argument("--random-models", action="store_true")
    ea.add_argument("--out")
    ea.set_defaults(func=cmd_exact_audit)

    strip = sub.add_parser("strip", help="unbounded strips").add_subparsers(
        dest="sub", required=True
    )
    ss = strip.add_parser("solve", help="truncate-and-double strip solver")
    ss.add_argument("--ladder", action="store_true", help="built-in width-1 ladder strip")
    ss.add_argument("--strip", help="strip JSON file")
    ss.add_argument("--start", help="start point as 'x,y' (default 0,0)")
    ss.add_argument("--tol", type=float, default=1e-10)
    ss.add_argument("--initial-height", type=int, default=4)
    ss.add_argument("--max-height", type=int, default=4096)
    ss.add_argument("--kmax", type=int, help="only print heights with |k| <= kmax")
    _add_common(ss)
    ss.set_defaults(func=cmd_strip_solve)

    inject = sub.add_parser("inject", help="pair suffix-swap map").add_subparsers(
        dest="sub", required=True
    )
    iv = inject.add_parser("verify", help="exhaustive audit up to a length bound")
    iv.add_argument("--region", required=True)
    iv.add_argument("--instance", required=True)
    iv.add_argument("--bound", type=int, required=True)
    iv.add_argument("--report", help="write the full report to this file")
    iv.add_argument("--no-roundtrip", action="store_true")
    iv.add_argument("--out")
    iv.set_defaults(func=cmd_inject_verify)
    it = inject.add_parser("trace", help="run one pair and draw the construction")
    it.add_argument("--pair", required=True, help="JSON with region, instance, first, second")
    it.add_argument("--svg", help="write a multi-panel SVG here")
    it.add_argument("--out")
    it.set_defaults(func=cmd_inject_trace)

    count = sub.add_parser("count", help="column-crossing counts")
    count.add_argument("--mode", choices=sorted(MODE_STEPS), required=True)
    count.add_argument("--region", required=True)
    count.add_argument("--column", type=int, required=True)
    count.add_argument("--from", dest="frm", help="start point (default left-bottom)")
    count.add_argument("--to", dest="to", help="end point (default right-top)")
    _add_common(count)
    count.set_defaults(func=cmd_count)

    crossing = sub.add_parser("crossing", help="conditioned monotone crossing law")
    crossing.add_argument("--region", required=True)
    crossing.add_argument("--model", required=True)
    crossing.add_argument("--start", required=True)
    crossing.add_argument("--target", required=True)
    crossing.add_argument("--column", type=int, required=True)
    _add_common(crossing)
    crossing.set_defaults(func=cmd_crossing)

    famous = sub.add_parser("famous", help="classic count families as CSV")
    famous.add_argument("family", choices=("delannoy", "ballot", "binomial"))
    famous.add_argument("--n", type=int, required=True)
    famous.add_argument("--out")
    famous.set_defaults(func=cmd_famous)

    mc = sub.add_parser("mc", help="Monte Carlo").add_subparsers(dest="sub", required=True)
    mr = mc.add_parser("run", help="simulate trajectories")
    mr.add_argument("--region", required=True)
    mr.add_argument("--model", required=True)
    mr.add_argument("--start", required=True)
    mr.add_argument("--n", type=int, required=True)
    mr.add_argument("--seed", type=int, required=True)
    mr.add_argument("--max-steps", type=int, default=1_000_000)
    mr.add_argument("--threads", type=int)
    mr.add_argument("--out")
    mr.set_defaults(func=cmd_mc_run)
    mcmp = mc.add_parser("compare", help="z-scores of a simulation against an exact law")
    mcmp.add_argument("--exact", required=True)
    mcmp.add_argument("--sim", required=True)
    mcmp.add_argument("--out")
    mcmp.set_defaults(func=cmd_mc_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError, KeyError, json.JSONDecodeError) as err:
        message = str(err) or err.__class__.__name__
        _emit({"error": {"type": err.__class__.__name__, "message": message}}, None)
        return 2


if __name__ == "__main__":
    sys.exit(main())
