"""Command-line front end for mining, combining, scoring, generating, and serving."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import assessment, combine, concepts, corpus, fanin, redirection, reports
from .errors import MiningError
from .facts import FilterConfig, load_facts

STATE_DIR_ENV = "CONCERNMINE_STATE"
UI_DIR_ENV = "CONCERNMINE_UI"

_PROFILE_DEFAULTS = {
    "1": {"fanin_min_callers": 10, "grouped_min_callers": 10},
    "2": {"fanin_min_callers": 10, "grouped_min_callers": 7},
}


class _Parser(argparse.ArgumentParser):
    # usage problems are input errors, not internal ones
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="concernmine", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--facts", required=True, help="facts/1 document to analyze")
        p.add_argument("--filters", help="JSON file with utility/accessor filter settings")
        p.add_argument("--out", help="report file; stdout when omitted")
        p.add_argument("--profile", choices=("1", "2"), help="apply the preset thresholds")

    p = sub.add_parser("fanin", parents=[], help="mine widely-called methods")
    add_common(p)
    p.add_argument("--min-callers", type=int, help="distinct-caller threshold (default 10)")

    p = sub.add_parser("grouped", help="mine groups of callees shared by the same callers")
    add_common(p)
    p.add_argument("--min-callers", type=int, help="extent threshold (default per profile)")
    p.add_argument("--min-callees", type=int, default=2, help="intent threshold (default 2)")

    p = sub.add_parser("redirect", help="mine one-to-one forwarding class pairs")
    add_common(p)
    p.add_argument("--min-redirectors", type=int, default=3)
    p.add_argument("--min-percentage", type=float, default=0.50)
    p.add_argument("--name-match", action="store_true", help="require matching pair names")

    p = sub.add_parser("combine", help="combine technique reports")
    p.add_argument("--mode", required=True, choices=("intersect", "refine", "union"))
    p.add_argument("--fanin", help="fan-in report (intersect/refine)")
    p.add_argument("--grouped", help="grouped-calls report (intersect/refine)")
    p.add_argument("--reports", nargs="*", default=[], help="labeled reports (union)")
    p.add_argument("--labels", help="seed registry (union)")
    p.add_argument("--out", help="combination report file; stdout when omitted")

    p = sub.add_parser("metrics", help="score a report against labels")
    p.add_argument("--report", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", help="metrics document file")
    p.add_argument("--csv", help="per-candidate CSV file")

    p = sub.add_parser("gen", help="generate a synthetic corpus with planted concerns")
    p.add_argument("--spec", required=True, help="JSON file with plants and background")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-facts", default="facts.json")
    p.add_argument("--out-truth", default="truth.json")

    p = sub.add_parser("serve", help="serve the triage API and UI")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--state", help=f"state directory (default ${STATE_DIR_ENV})")
    p.add_argument("--ui", help=f"UI bundle directory (default ${UI_DIR_ENV} or frontend/dist)")

    return parser


def _load_filters(path: str | None) -> FilterConfig:
    if path is None:
        return FilterConfig()
    with open(path, "r", encoding="utf-8") as fh:
        return FilterConfig.from_doc(json.load(fh))


def _emit(doc: dict[str, Any], out: str | None) -> None:
    if out is None:
        json.dump(doc, sys.stdout, sort_keys=True, indent=2, ensure_ascii=False)
        sys.stdout.write("\n")
    else:
        reports.dump_document(doc, out)


def _run_fanin(args: argparse.Namespace) -> int:
    facts = load_facts(args.facts)
    filters = _load_filters(args.filters)
    min_callers = args.min_callers
    if min_callers is None:
        profile = _PROFILE_DEFAULTS[args.profile or "1"]
        min_callers = profile["fanin_min_callers"]
    cfg = fanin.FanInConfig(min_callers=min_callers)
    candidates = fanin.mine_fanin(facts, filters, cfg)
    report = reports.TechniqueReport(
        technique=reports.TECHNIQUE_FANIN,
        facts_fingerprint=facts.fingerprint,
        config={"filters": filters.to_doc(), "min_callers": cfg.min_callers},
        candidates=tuple(candidates),
    )
    _emit(report.to_doc(), args.out)
    print(f"fanin: {len(candidates)} candidate(s)", file=sys.stderr)
    return 0


def _run_grouped(args: argparse.Namespace) -> int:
    facts = load_facts(args.facts)
    filters = _load_filters(args.filters)
    min_callers = args.min_callers
    if min_callers is None:
        profile = _PROFILE_DEFAULTS[args.profile or "1"]
        min_callers = profile["grouped_min_callers"]
    cfg = concepts.GroupedCallsConfig(min_callers=min_callers, min_callees=args.min_callees)
    candidates = concepts.mine_grouped(facts, filters, cfg)
    report = reports.TechniqueReport(
        technique=reports.TECHNIQUE_GROUPED,
        facts_fingerprint=facts.fingerprint,
        config={
            "filters": filters.to_doc(),
            "min_callers": cfg.min_callers,
            "min_callees": cfg.min_callees,
        },
        candidates=tuple(candidates),
    )
    _emit(report.to_doc(), args.out)
    print(f"grouped: {len(candidates)} candidate(s)", file=sys.stderr)
    return 0


def _run_redirect(args: argparse.Namespace) -> int:
    facts = load_facts(args.facts)
    filters = _load_filters(args.filters)
    cfg = redirection.RedirectionConfig(
        min_redirectors=args.min_redirectors,
        min_percentage=args.min_percentage,
        require_name_match=args.name_match,
    )
    candidates = redirection.mine_redirections(facts, filters, cfg)
    report = reports.TechniqueReport(
        technique=reports.TECHNIQUE_REDIRECT,
        facts_fingerprint=facts.fingerprint,
        config={
            "filters": filters.to_doc(),
            "min_redirectors": cfg.min_redirectors,
            "min_percentage": cfg.min_percentage,
            "require_name_match": cfg.require_name_match,
        },
        candidates=tuple(candidates),
    )
    _emit(report.to_doc(), args.out)
    print(f"redirect: {len(candidates)} candidate(s)", file=sys.stderr)
    return 0


def _run_combine(args: argparse.Namespace) -> int:
    if args.mode in ("intersect", "refine"):
        if not args.fanin or not args.grouped:
            print("combine: --fanin and --grouped are required", file=sys.stderr)
            return 1
        fi = reports.load_report(args.fanin)
        gc = reports.load_report(args.grouped)
        fn = combine.intersect_fanin_grouped if args.mode == "intersect" else combine.refine_all
        combined = fn(
            fi.candidates,
            gc.candidates,
            fi_fingerprint=fi.facts_fingerprint,
            gc_fingerprint=gc.facts_fingerprint,
        )
        technique = (
            reports.TECHNIQUE_INTERSECT if args.mode == "intersect" else reports.TECHNIQUE_REFINED
        )
        report = reports.TechniqueReport(
            technique=technique,
            facts_fingerprint=fi.facts_fingerprint,
            config={"mode": args.mode, "fanin": dict(fi.config), "grouped": dict(gc.config)},
            candidates=tuple(combined),
        )
        _emit(report.to_doc(), args.out)
        print(f"combine {args.mode}: {len(combined)} candidate(s)", file=sys.stderr)
        return 0

    if not args.labels or not args.reports:
        print("combine: --labels and --reports are required for union", file=sys.stderr)
        return 1
    registry = assessment.SeedRegistry(_existing(args.labels))
    seed_sets = []
    fingerprints = []
    for path in args.reports:
        report = reports.load_report(path)
        fingerprints.append(report.facts_fingerprint)
        seed_sets.append((report.technique, assessment.seed_entries(report, registry)))
    reports.check_same_fingerprint(*fingerprints)
    result = combine.union_seeds(seed_sets)
    _emit(result.to_doc(), args.out)
    print(f"combine union: {result.count} distinct seed(s)", file=sys.stderr)
    return 0


def _existing(path: str) -> str:
    if not Path(path).exists():
        raise FileNotFoundError(f"label file not found: {path}")
    return path


def _run_metrics(args: argparse.Namespace) -> int:
    report = reports.load_report(args.report)
    registry = assessment.SeedRegistry(_existing(args.labels))
    metrics = assessment.compute_metrics(report, registry)
    print(
        f"{metrics.technique}: precision {metrics.precision_summary}, "
        f"absolute recall {metrics.absolute_recall}"
    )
    if args.out:
        reports.dump_document(metrics.to_doc(), args.out)
    if args.csv:
        Path(args.csv).write_text(metrics.to_csv(registry), encoding="utf-8")
    return 0


def _run_gen(args: argparse.Namespace) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec_doc = json.load(fh)
    plants = [corpus.PlantSpec.from_doc(p) for p in spec_doc.get("plants", ())]
    background = corpus.BackgroundSpec.from_doc(spec_doc.get("background", {}))
    facts_doc, truth = corpus.generate(plants, background, args.seed)
    reports.dump_document(facts_doc, args.out_facts)
    reports.dump_document(truth.to_doc(), args.out_truth)
    print(
        f"gen: {len(facts_doc['methods'])} methods, {len(facts_doc['calls'])} calls, "
        f"{len(truth.concerns)} planted concern(s)",
        file=sys.stderr,
    )
    return 0


def _run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    state = args.state or os.environ.get(STATE_DIR_ENV)
    if not state:
        print(f"serve: --state or ${STATE_DIR_ENV} is required", file=sys.stderr)
        return 1
    ui = args.ui or os.environ.get(UI_DIR_ENV) or "frontend/dist"
    app = create_app(state, ui_dir=ui if Path(ui).is_dir() else None)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


_RUNNERS = {
    "fanin": _run_fanin,
    "grouped": _run_grouped,
    "redirect": _run_redirect,
    "combine": _run_combine,
    "metrics": _run_metrics,
    "gen": _run_gen,
    "serve": _run_serve,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _RUNNERS[args.command](args)
    except (MiningError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"concernmine {args.command}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"concernmine {args.command}: internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
