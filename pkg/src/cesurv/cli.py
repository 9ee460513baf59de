"""Command-line interface.

Subcommands: simulate, select, fit, evaluate, run-experiment and
reproduce-paper (simulation plus both bundled benchmark datasets).
Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .aft import AFTModel, fit, predict_median
from .copula_entropy import EstimatorConfig
from .dataio import DatasetSpec, bundled_dataset_spec, load_dataset, save_dataset
from .errors import CesurvError, InvalidInputError, NumericalError
from .experiment import run_experiment, write_performance_table, write_ranking_table
from .metrics import EvalReport, c_index, mae
from .survsim import SimConfig, simulate
from .varselect import rank_variables, select_variables

EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL = 3


def _add_estimator_flags(p):
    p.add_argument("--k", type=int, default=3, help="neighbor count (default 3)")
    p.add_argument("--norm", choices=("max", "euclidean"), default="max",
                   help="distance norm (default max)")
    p.add_argument("--seed", type=int, default=0,
                   help="simulation seed and tie-break jitter seed (default 0)")


def _add_dataset_flags(p):
    p.add_argument("--data", help="dataset file (delimited text with header)")
    p.add_argument("--time-col", default="time")
    p.add_argument("--status-col", default="status")
    p.add_argument("--event-value", default="1",
                   help="status value treated as an observed event (default 1)")
    p.add_argument("--covariates", help="comma-separated covariate columns "
                   "(default: all remaining numeric columns)")
    p.add_argument("--bundled", choices=("cancer", "veteran"),
                   help="use a bundled benchmark dataset instead of --data")
    p.add_argument("--dataset-spec", help="JSON file with DatasetSpec fields")
    p.add_argument("--sim-config", help="JSON file with simulation settings")


def _estimator_cfg(args) -> EstimatorConfig:
    return EstimatorConfig(k=args.k, norm=args.norm, jitter_seed=args.seed)


def _parse_event_value(raw):
    try:
        f = float(raw)
        return int(f) if f.is_integer() else f
    except ValueError:
        return raw


def _source_from_args(args):
    given = [s for s in ("data", "bundled", "dataset_spec", "sim_config")
             if getattr(args, s, None)]
    if len(given) != 1:
        raise InvalidInputError(
            "specify exactly one of --data, --bundled, --dataset-spec or --sim-config"
        )
    if args.bundled:
        return bundled_dataset_spec(args.bundled)
    if args.dataset_spec:
        with open(args.dataset_spec, encoding="utf-8") as fh:
            d = json.load(fh)
        if d.get("covariate_cols") is None:
            d.pop("covariate_cols", None)
        return DatasetSpec.from_dict(d)
    if args.data:
        cov = tuple(args.covariates.split(",")) if args.covariates else None
        return DatasetSpec(
            path=args.data,
            time_col=args.time_col,
            status_col=args.status_col,
            covariate_cols=cov,
            status_event_value=_parse_event_value(args.event_value),
        )
    with open(args.sim_config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    cfg.setdefault("seed", args.seed)
    return SimConfig.from_dict(cfg)


def _write_text(path, text):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_simulate(args):
    if args.sim_config:
        with open(args.sim_config, encoding="utf-8") as fh:
            cfg_dict = json.load(fh)
        cfg_dict.setdefault("seed", args.seed)
        if args.n is not None:
            cfg_dict["n_subjects"] = args.n
        cfg = SimConfig.from_dict(cfg_dict)
    else:
        cfg = SimConfig(seed=args.seed, **({"n_subjects": args.n} if args.n else {}))
    ds = simulate(cfg)
    if not args.out:
        raise InvalidInputError("simulate requires --out FILE for the dataset")
    save_dataset(ds, args.out)
    print(f"wrote {ds.n_rows} rows ({ds.n_events} events) to {args.out}")
    return 0


def _cmd_select(args):
    cfg = _estimator_cfg(args)
    source = _source_from_args(args)
    ds = simulate(source) if isinstance(source, SimConfig) else load_dataset(source)
    ranking = rank_variables(ds, with_status=args.with_status, cfg=cfg)
    result = {
        "estimator_cfg": cfg.to_dict(),
        "ranking": ranking.to_dict(),
    }
    if args.top is not None:
        result["selected"] = select_variables(ranking, top_m=args.top)
    _write_text(args.out, json.dumps(result, indent=2) + "\n")
    if args.plot_data:
        with open(args.plot_data, "w", encoding="utf-8") as fh:
            fh.write("name,ce\n")
            for e in ranking.entries:
                fh.write(f"{e.name},{e.ce!r}\n")
    return 0


def _cmd_fit(args):
    source = _source_from_args(args)
    ds = simulate(source) if isinstance(source, SimConfig) else load_dataset(source)
    included = args.covariates.split(",") if args.covariates else list(ds.names)
    model = fit(ds, included)
    _write_text(args.out, json.dumps({"model": model.to_dict()}, indent=2) + "\n")
    return 0


def _cmd_evaluate(args):
    source = _source_from_args(args)
    ds = simulate(source) if isinstance(source, SimConfig) else load_dataset(source)
    with open(args.model, encoding="utf-8") as fh:
        payload = json.load(fh)["model"]
    model = AFTModel(
        intercept=payload["intercept"],
        coefficients=np.asarray(payload["coefficients"], dtype=float),
        log_scale=payload["log_scale"],
        included=payload["included"],
        converged=payload["converged"],
        iterations=payload["iterations"],
        final_gradient_norm=payload["final_gradient_norm"],
    )
    cols = [ds.names.index(n) for n in model.included]
    pred = np.array([predict_median(model, row) for row in ds.covariates[:, cols]])
    mae_val, n_events = mae(pred, ds.time, ds.status)
    c_val, n_pairs = c_index(pred, ds.time, ds.status)
    report = EvalReport(
        model_label=args.label, mae=mae_val, c_index=c_val,
        n_comparable_pairs=n_pairs, n_events_used=n_events,
    )
    _write_text(args.out, json.dumps(report.to_dict(), indent=2) + "\n")
    return 0


def _cmd_run_experiment(args):
    cfg = _estimator_cfg(args)
    source = _source_from_args(args)
    report = run_experiment(
        source, estimator_cfg=cfg, with_status=args.with_status, top_m=args.top,
    )
    _write_text(args.out, report.to_json())
    if args.plot_data:
        prefix = Path(args.plot_data)
        write_ranking_table(report, prefix.with_suffix(".ranking.csv"))
        write_performance_table(report, prefix.with_suffix(".performance.csv"))
    return 0


def _cmd_reproduce_paper(args):
    cfg = _estimator_cfg(args)
    outdir = Path(args.out or "paper_outputs")
    outdir.mkdir(parents=True, exist_ok=True)
    runs = [
        ("simulation", SimConfig(seed=args.seed), dict(include_status_ranking=True)),
        ("cancer", bundled_dataset_spec("cancer"), {}),
        ("veteran", bundled_dataset_spec("veteran"), {}),
    ]
    for name, source, extra in runs:
        report = run_experiment(source, estimator_cfg=cfg, top_m=4, **extra)
        (outdir / f"{name}_report.json").write_text(report.to_json(), encoding="utf-8")
        write_ranking_table(report, outdir / f"{name}_ranking.csv")
        write_performance_table(report, outdir / f"{name}_performance.csv")
        evs = {e.model_label: e for e in report.evaluations}
        print(f"{name}: selected {report.selected}")
        for label, ev in evs.items():
            print(f"  {label:12s} mae {ev.mae:10.3f}  c-index {ev.c_index:.4f}")
    print(f"reports and plot data written to {outdir}/")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cesurv",
        description="Copula-entropy variable selection and Weibull AFT "
                    "modelling for right-censored survival data",
    )
    parser.add_argument("--version", action="version", version=f"cesurv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a simulated dataset file")
    p.add_argument("--sim-config", help="JSON file with simulation settings")
    p.add_argument("--n", type=int, help="override subject count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output dataset file")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("select", help="rank covariates by copula entropy")
    _add_dataset_flags(p)
    _add_estimator_flags(p)
    p.add_argument("--with-status", action="store_true",
                   help="include the censoring indicator in the CE estimate")
    p.add_argument("--top", type=int, help="also report the top-m selection")
    p.add_argument("--out", help="write the ranking report JSON here")
    p.add_argument("--plot-data", help="write a (name, ce) table here")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("fit", help="fit a Weibull AFT regression")
    _add_dataset_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the fitted model JSON here")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("evaluate", help="evaluate a fitted model on a dataset")
    _add_dataset_flags(p)
    p.add_argument("--model", required=True, help="model JSON from `cesurv fit`")
    p.add_argument("--label", default="model", help="model label for the report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the evaluation JSON here")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("run-experiment", help="selection + AFT fits + metrics")
    _add_dataset_flags(p)
    _add_estimator_flags(p)
    p.add_argument("--with-status", action="store_true")
    p.add_argument("--top", type=int, required=True, help="select the top-m covariates")
    p.add_argument("--out", help="write the experiment report JSON here")
    p.add_argument("--plot-data", help="prefix for plot-data tables")
    p.set_defaults(func=_cmd_run_experiment)

    p = sub.add_parser("reproduce-paper",
                       help="run the simulation and both bundled datasets")
    _add_estimator_flags(p)
    p.add_argument("--out", help="output directory (default paper_outputs)")
    p.set_defaults(func=_cmd_reproduce_paper)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CesurvError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except json.JSONDecodeError as e:
        print(f"error: invalid JSON input ({e})", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
