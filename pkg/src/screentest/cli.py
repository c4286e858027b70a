"""Command-line entry point.

Exit codes: 0 success, 1 findings or crashes present (disable with
``--exit-zero``), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from screentest.activity import LabeledDataset
from screentest.features import FEATURE_NAMES, dataset_to_csv, extract_features, read_dataset
from screentest.hierarchy import load_snapshot
from screentest.learn import (
    DEFAULT_BLEND,
    cross_validate,
    grid_search_blend,
    info_gain_rank,
    knn_spec,
    kstar_spec,
    kstar_train,
    load_model,
    majority_spec,
    save_model,
)
from screentest.lexicon import default_lexicon, load_lexicon
from screentest.runner.config import RunConfig, load_run_config
from screentest.runner.dataset_gen import DEFAULT_PER_TYPE, DEFAULT_SEED, build_dataset_from_apps, bundled_dataset
from screentest.runner.explore import explore_and_test
from screentest.runner.monkey import monkey_run
from screentest.runner.report import TestReport, generate_report, parse_run_document
from screentest.simdevice.loader import BUNDLED_APPS, load_app_source
from screentest.simdevice.model import SimApp, UnknownFaultError, inject_all, inject_fault

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


def _folds(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("folds must be at least 2")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _blend(text: str) -> float:
    b = float(text)
    if not 0.0 <= b <= 100.0:
        raise argparse.ArgumentTypeError("blend must be in [0, 100]")
    return b


def _dataset(path: str | None) -> LabeledDataset:
    return read_dataset(path) if path else bundled_dataset()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------------


def cmd_extract(args: argparse.Namespace) -> int:
    fmt = "xml" if args.xml else "native" if args.native else None
    snap = load_snapshot(args.dump, fmt)
    lex = load_lexicon(args.lexicon) if args.lexicon else default_lexicon()
    fv = extract_features(snap, lex)
    if args.json:
        print(json.dumps(dict(zip(FEATURE_NAMES, fv.values))))
    else:
        print(",".join(FEATURE_NAMES))
        print(",".join(str(v) for v in fv.values))
    return EXIT_OK


def cmd_dataset_build(args: argparse.Namespace) -> int:
    apps = [load_app_source(a) for a in args.apps]
    lex = load_lexicon(args.lexicon) if args.lexicon else default_lexicon()
    ds = build_dataset_from_apps(apps, args.per_type, args.seed, lex)
    _emit(dataset_to_csv(zip(ds.features, ds.labels)), args.out)
    if args.out:
        print(f"wrote {len(ds)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    model = kstar_train(_dataset(args.data), args.blend)
    save_model(model, args.out)
    print(f"trained K* (blend {args.blend:g}) on {len(model.training)} instances; saved to {args.out}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    ds = _dataset(args.data)
    rows = [
        (f"K* (blend {args.blend:g})", kstar_spec(args.blend)),
        ("1-NN", knn_spec(1)),
        ("3-NN", knn_spec(3)),
        ("majority", majority_spec()),
    ]
    print(f"{len(ds)} instances, {len(ds.classes())} classes, {args.folds}-fold stratified CV, seed {args.seed}")
    for name, spec in rows:
        print(f"  {name:<16} {cross_validate(ds, spec, args.folds, args.seed):.4f}")
    if args.grid:
        best, table = grid_search_blend(ds, folds=args.folds, seed=args.seed)
        print("blend grid:")
        for b, acc in table.items():
            print(f"  blend {b:>5g}  {acc:.4f}{'  *' if b == best else ''}")
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    ranking = info_gain_rank(_dataset(args.data))
    print("rank  score     feature")
    for pos, (idx, score) in enumerate(ranking, 1):
        print(f"{pos:>4}  {score:.6f}  {FEATURE_NAMES[idx]}")
    return EXIT_OK


def _apps_with_faults(args: argparse.Namespace) -> list[SimApp]:
    apps = [load_app_source(a) for a in args.apps]
    if args.all_faults:
        apps = [inject_all(a) for a in apps]
    for fid in args.fault:
        owners = [i for i, a in enumerate(apps) if fid in a.fault_catalog]
        if not owners:
            raise UnknownFaultError(f"no selected app has fault {fid!r}")
        for i in owners:
            apps[i] = inject_fault(apps[i], fid)
    return apps


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = load_run_config(args.config) if args.config else RunConfig()
    return cfg.with_(
        time_budget_ms=getattr(args, "budget", None),
        monkey_event_count=getattr(args, "events", None),
        monkey_seed=getattr(args, "seed", None),
        scenario_seed=getattr(args, "scenario_seed", None),
    )


def _finish(reports: list[TestReport], args: argparse.Namespace) -> int:
    fmt = args.format
    if args.out:
        _emit(generate_report(reports, "structured", args.wall_clock), args.out)
    if fmt == "structured":
        sys.stdout.write(generate_report(reports, "structured", args.wall_clock))
    else:
        sys.stdout.write(generate_report(reports, "text"))
    found = any(r.logical_bug_count or r.crash_count for r in reports)
    return EXIT_FINDINGS if found and not args.exit_zero else EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _config(args)
    model_path = args.model or cfg.model_path
    model = load_model(model_path) if model_path else kstar_train(bundled_dataset(), DEFAULT_BLEND)
    lex = cfg.lexicon()
    reports = [explore_and_test(app, model, cfg, lex) for app in _apps_with_faults(args)]
    return _finish(reports, args)


def cmd_monkey(args: argparse.Namespace) -> int:
    cfg = _config(args)
    reports = [monkey_run(app, cfg) for app in _apps_with_faults(args)]
    return _finish(reports, args)


def cmd_report(args: argparse.Namespace) -> int:
    with open(args.run_output, encoding="utf-8") as fh:
        reports = parse_run_document(fh.read())
    sys.stdout.write(generate_report(reports, args.format))
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--out", help="also write the structured report to this file")
    p.add_argument("--exit-zero", action="store_true", help="exit 0 even when findings are present")
    p.add_argument("--wall-clock", action="store_true", help="include wall-clock time in structured output")
    p.add_argument("--config", help="run config JSON file")


def _fault_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("apps", nargs="+", metavar="app", help=f"bundled app ({', '.join(BUNDLED_APPS)}) or definition file")
    p.add_argument("--fault", action="append", default=[], metavar="ID", help="inject a catalog fault (repeatable)")
    p.add_argument("--all-faults", action="store_true", help="inject every catalog fault of each app")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="screentest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="print the feature vector of a hierarchy dump")
    p.add_argument("dump")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--xml", action="store_true", help="uiautomator XML input")
    g.add_argument("--native", action="store_true", help="native JSON input")
    p.add_argument("--lexicon")
    p.add_argument("--json", action="store_true", help="print a JSON object instead of CSV")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("dataset", help="dataset utilities")
    dsub = p.add_subparsers(dest="dataset_command", required=True)
    b = dsub.add_parser("build", help="generate a labelled dataset from app definitions")
    b.add_argument("--apps", nargs="+", default=list(BUNDLED_APPS))
    b.add_argument("--per-type", type=_positive, default=DEFAULT_PER_TYPE)
    b.add_argument("--seed", type=int, default=DEFAULT_SEED)
    b.add_argument("--lexicon")
    b.add_argument("--out")
    b.set_defaults(func=cmd_dataset_build)

    p = sub.add_parser("train", help="train a K* model and save it")
    p.add_argument("--data", help="dataset CSV (default: bundled dataset)")
    p.add_argument("--blend", type=_blend, default=DEFAULT_BLEND)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="cross-validate K* against baselines")
    p.add_argument("--data")
    p.add_argument("--folds", type=_folds, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--blend", type=_blend, default=DEFAULT_BLEND)
    p.add_argument("--grid", action="store_true", help="also search the blend grid")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("rank", help="rank features by information gain")
    p.add_argument("--data")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("run", help="explore apps, classify screens and run scenarios")
    _fault_flags(p)
    p.add_argument("--model", help="saved K* model (default: train on the bundled dataset)")
    p.add_argument("--budget", type=_positive, help="virtual time budget in ms")
    p.add_argument("--scenario-seed", type=int)
    _output_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("monkey", help="random-event baseline")
    _fault_flags(p)
    p.add_argument("--events", type=_positive)
    p.add_argument("--seed", type=int)
    _output_flags(p)
    p.set_defaults(func=cmd_monkey)

    p = sub.add_parser("report", help="render a saved structured run report")
    p.add_argument("run_output")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError, UnknownFaultError) as exc:
        print(f"screentest: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
