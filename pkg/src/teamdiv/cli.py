"""Command-line driver: validate, analyze, synth, tables-check.

Flag values override config-file values, which override the defaults.
Exit codes: 0 success, 1 analysis or check failure, 2 I/O or usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .corpus import (
    AnalysisConfig,
    ConfigError,
    CorpusValidationError,
    load_corpus,
    select_analysis_set,
    validate_jsonl,
    write_corpus_jsonl,
)
from .diversity import write_metrics_csv
from .expertise import write_profiles
from .reference import run_reference_checks
from .report import (
    ALL_FORMATS,
    EmptyAnalysisSetError,
    aggregate_report,
    build_profiles,
    compute_paper_metrics,
    render,
)
from .synth import SynthParams, generate_corpus, write_params

OUTPUT_ENV_VAR = "TEAMDIV_OUTPUT"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_IO = 2


def _default_output() -> str:
    return os.environ.get(OUTPUT_ENV_VAR, "teamdiv-out")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON config file mirroring the analysis settings")
    parser.add_argument("--output", metavar="DIR", default=None,
                        help=f"output directory (default: ${OUTPUT_ENV_VAR} or ./teamdiv-out)")
    parser.add_argument("--format", default="all",
                        help="comma-separated render formats: csv,markdown,svg (default: all)")
    strictness = parser.add_mutually_exclusive_group()
    strictness.add_argument("--strict", dest="strict", action="store_true", default=True,
                            help="abort on the first invalid record (default)")
    strictness.add_argument("--lenient", dest="strict", action="store_false",
                            help="skip invalid records with a warning")
    parser.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker processes for per-paper metrics (affects wall time only)")


def _add_config_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window-years", type=int, default=None)
    parser.add_argument("--top-k", type=int, default=None)
    parser.add_argument("--edge-threshold", type=float, default=None)
    parser.add_argument("--year-range", type=int, nargs=2, default=None, metavar=("START", "END"))
    parser.add_argument("--min-citations", type=int, default=None)
    parser.add_argument("--min-authors", type=int, default=None)
    parser.add_argument("--inclusive-threshold", action="store_true", default=None,
                        help="use <= instead of < at the edge threshold")


def build_config(args: argparse.Namespace) -> AnalysisConfig:
    settings: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as handle:
            settings.update(json.load(handle))
    overrides = {
        "window_years": args.window_years,
        "top_k": args.top_k,
        "edge_threshold": args.edge_threshold,
        "year_range": tuple(args.year_range) if args.year_range else None,
        "min_citations": args.min_citations,
        "min_authors": args.min_authors,
        "inclusive_threshold": args.inclusive_threshold,
    }
    settings.update({k: v for k, v in overrides.items() if v is not None})
    return AnalysisConfig.from_dict(settings)


def _parse_formats(value: str) -> tuple[str, ...]:
    if value == "all":
        return ALL_FORMATS
    formats = tuple(part.strip() for part in value.split(",") if part.strip())
    unknown = set(formats) - set(ALL_FORMATS)
    if unknown:
        raise ValueError(f"unknown formats: {sorted(unknown)}")
    return formats


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        problems = validate_jsonl(args.corpus)
    except OSError as exc:
        print(f"error: cannot read {args.corpus}: {exc}", file=sys.stderr)
        return EXIT_IO
    if problems:
        for problem in problems:
            print(problem)
        print(f"{len(problems)} problem(s) found")
        return EXIT_FAILURE
    print("corpus is valid")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        formats = _parse_formats(args.format)
        config = build_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        corpus = load_corpus(args.corpus, strict=args.strict)
    except OSError as exc:
        print(f"error: cannot read {args.corpus}: {exc}", file=sys.stderr)
        return EXIT_IO
    except CorpusValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    selected = select_analysis_set(corpus, config)
    if not selected:
        print("error: no papers satisfy the selection constraints", file=sys.stderr)
        return EXIT_FAILURE
    profiles = build_profiles(corpus, config, sorted(selected))
    metrics = compute_paper_metrics(corpus, config, selected, profiles=profiles, jobs=args.jobs)
    report = aggregate_report(corpus, config, metrics)

    out_dir = Path(args.output or _default_output())
    try:
        render(report, out_dir, formats=formats)
        if args.dump_profiles:
            write_profiles(args.dump_profiles, profiles)
        if args.dump_metrics:
            write_metrics_csv(args.dump_metrics, metrics)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    nonempty = sum(1 for s in report.buckets if s.n_papers > 0)
    print(f"papers analysed: {report.n_selected} across {nonempty} buckets")
    corr = report.ratio_correlation
    if corr is None:
        print("ratio vs median correlation: undefined")
    else:
        verdict = "significant" if corr.significant else "not significant"
        print(f"ratio vs median correlation: r = {corr.r:.3f}, p = {corr.p_value:.3g} ({verdict})")
    significant_adjacent = sum(1 for t in report.adjacent_tests if t.result.significant)
    print(
        f"adjacent-bucket chi-square: {significant_adjacent}/{len(report.adjacent_tests)} "
        f"significant at p < 0.05"
    )
    for warning in report.warnings:
        print(f"warning: {warning}")
    print(f"report written to {out_dir}")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    settings: dict = {}
    if args.params:
        try:
            with open(args.params, "r", encoding="utf-8") as handle:
                settings.update(json.load(handle))
        except OSError as exc:
            print(f"error: cannot read {args.params}: {exc}", file=sys.stderr)
            return EXIT_IO
        settings.pop("rng", None)
        if "team_size_distribution" in settings:
            settings["team_size_distribution"] = {
                int(k): v for k, v in settings["team_size_distribution"].items()
            }
        if "year_range" in settings:
            settings["year_range"] = tuple(settings["year_range"])
    overrides = {
        "seed": args.seed,
        "n_authors": args.authors,
        "n_topics": args.topics,
        "n_papers": args.papers,
        "n_expertise_clusters": args.clusters,
        "cluster_mix": args.mix,
        "coupling": args.coupling,
        "citation_noise": args.citation_noise,
    }
    settings.update({k: v for k, v in overrides.items() if v is not None})
    try:
        params = SynthParams(**settings)
    except (TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    corpus = generate_corpus(params)
    out_dir = Path(args.output or _default_output())
    corpus_path = out_dir / "corpus.jsonl"
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_corpus_jsonl(corpus, corpus_path)
        write_params(params, out_dir / "params.json")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(corpus)} records ({params.n_papers} analysis papers) to {corpus_path}")
    return EXIT_OK


def cmd_tables_check(args: argparse.Namespace) -> int:
    checks = run_reference_checks()
    failures = 0
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: {check.detail}")
        if not check.passed:
            failures += 1
    if failures:
        print(f"{failures}/{len(checks)} checks failed")
        return EXIT_FAILURE
    print(f"all {len(checks)} checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teamdiv",
        description="Team expertise-diversity metrics and their association with citations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a JSONL corpus against the schema")
    p_validate.add_argument("corpus", help="path to a JSONL corpus")
    p_validate.set_defaults(func=cmd_validate)

    p_analyze = sub.add_parser("analyze", help="run the full analysis and write a report")
    p_analyze.add_argument("corpus", help="path to a JSONL corpus")
    _add_common_flags(p_analyze)
    _add_config_overrides(p_analyze)
    p_analyze.add_argument("--dump-profiles", metavar="PATH", default=None,
                           help="also write author expertise profiles as JSONL")
    p_analyze.add_argument("--dump-metrics", metavar="PATH", default=None,
                           help="also write per-paper metrics as CSV")
    p_analyze.set_defaults(func=cmd_analyze)

    p_synth = sub.add_parser("synth", help="generate a synthetic corpus")
    p_synth.add_argument("--params", metavar="PATH", help="JSON file of generation parameters")
    p_synth.add_argument("--seed", type=int, default=None)
    p_synth.add_argument("--papers", type=int, default=None, help="number of analysis papers")
    p_synth.add_argument("--authors", type=int, default=None)
    p_synth.add_argument("--topics", type=int, default=None)
    p_synth.add_argument("--clusters", type=int, default=None, help="number of expertise clusters")
    p_synth.add_argument("--mix", type=float, default=None,
                         help="probability an author publishes outside their home cluster")
    p_synth.add_argument("--coupling", type=float, default=None,
                         help="diversity-citation coupling in [-1, 1]")
    p_synth.add_argument("--citation-noise", type=float, default=None,
                         help="negative-binomial dispersion of citation counts")
    p_synth.add_argument("--output", metavar="DIR", default=None)
    p_synth.set_defaults(func=cmd_synth)

    p_check = sub.add_parser("tables-check", help="replay the embedded reference-table checks")
    p_check.set_defaults(func=cmd_tables_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except EmptyAnalysisSetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
