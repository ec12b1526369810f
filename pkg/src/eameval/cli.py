"""Command-line interface: evaluate, compare, selftest.

evaluate runs the full metric suite for one dataset and writes
report.json, tables.csv, and per-curve CSV/SVG files. compare overlays
the cost-efficiency curves of two or more effort drivers in a single
plot. selftest runs the built-in toy-instance oracle suite.

Exit codes: 0 success, 1 computation error, 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from . import __version__
from .dataset import load_dataset
from .effort import parse_driver
from .evaluate import evaluate_suite
from .model import (
    SCORE_KINDS,
    derive_predictor,
    fit_blr,
    import_scores,
    predict_proba,
)
from .ranking import optimal_ranking, rank_by_density, rank_by_score
from .curves import cost_efficiency_curve
from .report import (
    report_dict,
    write_curve_csv,
    write_report_json,
    write_tables_csv,
)
from .selftest import run_selftest
from .svg import render_curves


class UsageError(Exception):
    """Bad flag combination; maps to exit code 2."""


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="dataset CSV path")
    parser.add_argument("--label-col", default=None, metavar="NAME",
                        help="label column (default: sidecar or 'Defective')")
    parser.add_argument("--count-col", default=None, metavar="NAME",
                        help="defect count column (default: absent)")
    parser.add_argument("--predictors", default=None, metavar="LIST",
                        help="comma-separated predictors for the logistic model; "
                             "A/B derives a density ratio, e.g. LOC,McCC/LOC")
    parser.add_argument("--scores", default=None, metavar="CSV",
                        help="precomputed scores instead of fitting a model")
    parser.add_argument("--score-kind", choices=SCORE_KINDS, default="probability",
                        help="interpretation of imported scores")
    parser.add_argument("--score-match", choices=("id", "order"), default="id",
                        help="match imported scores by module id or by file order")
    parser.add_argument("--rank", choices=("score", "density", "optimal"), default="score",
                        help="ranking policy")
    parser.add_argument("--norm", default="LOC", metavar="MEASURE",
                        help="normalizing measure for density ranking")
    parser.add_argument("--effort", action="append", default=None, metavar="DRIVER",
                        help="effort driver: a measure name or "
                             "'composite:A,B,<weight>[,minmax]'; repeatable")
    parser.add_argument("--tie-break", choices=("asc", "desc", "input"), default="asc",
                        help="order among equal-score modules: ascending driver value, "
                             "descending, or dataset order")
    parser.add_argument("--benefit", choices=("modules", "defects"), default="modules",
                        help="count defective modules found, or defects (needs --count-col)")
    parser.add_argument("--popt-interp", choices=("linear", "step"), default="linear",
                        help="curve interpolation used for Popt areas")
    parser.add_argument("--out-dir", default="eameval-out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eameval",
        description="Effort-aware evaluation of defect prediction models.",
    )
    parser.add_argument("--version", action="version", version=f"eameval {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="run the metric suite on one dataset")
    _add_data_flags(p_eval)
    p_eval.add_argument("--budgets", default="0.2,0.5", metavar="LIST",
                        help="comma-separated effort budgets in [0,1]")

    p_cmp = sub.add_parser("compare", help="overlay curves for two or more drivers")
    _add_data_flags(p_cmp)

    sub.add_parser("selftest", help="run the built-in oracle checks")
    return parser


def _parse_budgets(text: str) -> list[float]:
    budgets = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            value = float(chunk)
        except ValueError:
            raise UsageError(f"bad budget {chunk!r}") from None
        if not 0.0 <= value <= 1.0:
            raise UsageError(f"budget {chunk} is outside [0, 1]")
        budgets.append(value)
    return budgets


def _prepare(args):
    """Load the dataset, produce scores, and parse drivers."""
    if (args.predictors is None) == (args.scores is None):
        raise UsageError("exactly one of --predictors or --scores is required")
    d = load_dataset(args.data, label_column=args.label_col, count_column=args.count_col)
    if args.predictors is not None:
        names = [p.strip() for p in args.predictors.split(",") if p.strip()]
        if not names:
            raise UsageError("--predictors is empty")
        for name in names:
            if "/" in name:
                d = derive_predictor(d, name)
        fitted = fit_blr(d, names)
        scores = predict_proba(fitted, d)
        model = {
            "kind": "blr",
            "predictors": list(fitted.predictors),
            "coefficients": [float(c) for c in fitted.coefficients],
            "converged": fitted.converged,
            "iterations": fitted.iterations,
            "log_likelihood": fitted.log_likelihood,
            "separation": fitted.separation,
        }
    else:
        scores = import_scores(args.scores, d, kind=args.score_kind, match=args.score_match)
        model = {"kind": "imported", "path": args.scores, "score_kind": args.score_kind}
    drivers = [parse_driver(text) for text in (args.effort or ["LOC"])]
    return d, scores, model, drivers


def _echo_flags(args, command: str) -> dict:
    flags = {
        "command": command,
        "data": args.data,
        "label_col": args.label_col,
        "count_col": args.count_col,
        "predictors": args.predictors,
        "scores": args.scores,
        "rank": args.rank,
        "effort": list(args.effort or ["LOC"]),
        "out_dir": args.out_dir,
    }
    if args.scores is not None:
        flags["score_kind"] = args.score_kind
        flags["score_match"] = args.score_match
    return flags


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", text)


def _benefit_label(benefit: str) -> str:
    if benefit == "defects":
        return "proportion of defects found"
    return "proportion of defective modules found"


def cmd_evaluate(args) -> int:
    d, scores, model, drivers = _prepare(args)
    budgets = _parse_budgets(args.budgets)
    name = Path(args.data).stem
    result = evaluate_suite(
        d,
        scores,
        drivers,
        budgets,
        policies=[args.rank],
        norm=args.norm,
        tie_break=args.tie_break,
        benefit=args.benefit,
        interpolation=args.popt_interp,
        dataset_name=name,
        model=model,
    )

    out_dir = Path(args.out_dir)
    curves_dir = out_dir / "curves"
    curves_dir.mkdir(parents=True, exist_ok=True)

    curve_files = {}
    by_policy: dict[str, list] = {}
    for cell in result.cells:
        csv_name = f"{name}_{cell.policy}_{_slug(cell.driver)}.csv"
        write_curve_csv(curves_dir / csv_name, cell.curve)
        svg_name = f"{name}_{cell.policy}.svg"
        curve_files[(cell.policy, cell.driver)] = {
            "csv": f"curves/{csv_name}",
            "svg": f"curves/{svg_name}",
        }
        by_policy.setdefault(cell.policy, []).append((cell.driver, cell.curve))
    for policy, labeled in by_policy.items():
        render_curves(
            curves_dir / f"{name}_{policy}.svg",
            [(driver, curve.xs, curve.ys) for driver, curve in labeled],
            title=f"{name} ({policy} ranking)",
            y_label=_benefit_label(args.benefit),
        )

    payload = report_dict(result, curve_files, flags=_echo_flags(args, "evaluate"))
    write_report_json(out_dir / "report.json", payload)
    write_tables_csv(out_dir / "tables.csv", result)
    print(f"wrote {out_dir / 'report.json'}")
    print(f"wrote {out_dir / 'tables.csv'}")
    print(f"wrote {len(result.cells)} curve file(s) under {curves_dir}")
    return 0


def cmd_compare(args) -> int:
    d, scores, model, drivers = _prepare(args)
    if len(drivers) < 2:
        raise UsageError("need >=2 drivers: repeat --effort")
    name = Path(args.data).stem

    labeled = []
    for drv in drivers:
        if args.rank == "score":
            ranking = rank_by_score(scores, d, driver=drv, tie_break=args.tie_break)
        elif args.rank == "density":
            ranking = rank_by_density(scores, args.norm, d, driver=drv, tie_break=args.tie_break)
        else:
            ranking = optimal_ranking(d, drv)
        labeled.append((drv.name, cost_efficiency_curve(ranking, drv, d, benefit=args.benefit)))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    svg_path = out_dir / f"{name}_compare.svg"
    render_curves(
        svg_path,
        [(label, curve.xs, curve.ys) for label, curve in labeled],
        title=f"{name}: effort drivers compared ({args.rank} ranking)",
        y_label=_benefit_label(args.benefit),
    )
    csv_path = out_dir / f"{name}_compare.csv"
    import csv as _csv

    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["driver", "policy", "effort_fraction", "benefit"])
        for label, curve in labeled:
            for x, y in curve.points:
                writer.writerow([label, curve.policy, repr(x), repr(y)])
    print(f"wrote {svg_path}")
    print(f"wrote {csv_path}")
    return 0


def cmd_selftest(args) -> int:
    results = run_selftest()
    width = max(len(name) for name, _, _ in results)
    failures = 0
    for name, passed, detail in results:
        status = "ok  " if passed else "FAIL"
        line = f"{status}  {name.ljust(width)}"
        if detail:
            line += f"  {detail}"
        print(line)
        failures += 0 if passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "evaluate": cmd_evaluate,
        "compare": cmd_compare,
        "selftest": cmd_selftest,
    }[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
