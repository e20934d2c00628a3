"""End-to-end analysis: select, profile, score, bucket, aggregate, render.

The pipeline groups the analysis set into citation buckets and aggregates
both diversity metrics per bucket, then runs the association tests:
Pearson correlation of the #1/#0 ratio (and category shares) against the
bucket citation medians, and chi-square homogeneity tests between
adjacent and pooled buckets.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import svgchart
from .corpus import AnalysisConfig, CitationBucket, Corpus, select_analysis_set
from .diversity import CATEGORIES, PaperDiversity, paper_diversity
from .expertise import (
    BackgroundDistribution,
    ExpertiseVector,
    background_distribution,
    profile_author,
)
from .stats import (
    DEFAULT_EPSILON,
    ChiSquareResult,
    CorrelationResult,
    chi_square_homogeneity,
    median,
    one_zero_counts,
    pearson,
)

DEFAULT_BIN_WIDTH = 0.05


class EmptyAnalysisSetError(ValueError):
    """No papers satisfied the selection constraints."""


@dataclass(frozen=True)
class Histogram:
    """Interior bin counts over (0, 1) plus exact-0 and exact-1 spikes."""

    bin_width: float
    zero_count: int
    one_count: int
    bin_counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return self.zero_count + self.one_count + sum(self.bin_counts)


@dataclass(frozen=True)
class BucketStats:
    """Aggregates for one citation bucket.

    ``category_counts`` and ``category_percentages`` follow the category
    order (low, moderate, high, very_high). Derived fields are None when
    the bucket is empty or the denominator is zero.
    """

    bucket: CitationBucket
    n_papers: int
    citation_median: float | None
    zeros: int
    ones: int
    category_counts: tuple[int, int, int, int]

    @property
    def label(self) -> str:
        return self.bucket.label

    @property
    def one_zero_ratio(self) -> float | None:
        if self.zeros == 0:
            return None
        return self.ones / self.zeros

    @property
    def category_percentages(self) -> tuple[float, float, float, float] | None:
        if self.n_papers == 0:
            return None
        return tuple(100.0 * c / self.n_papers for c in self.category_counts)

    @property
    def severity_ratio(self) -> float | None:
        """(high + very_high) / low share, the classic last-column summary."""
        low = self.category_counts[0]
        if low == 0:
            return None
        return (self.category_counts[2] + self.category_counts[3]) / low


@dataclass(frozen=True)
class LabeledTest:
    label: str
    result: ChiSquareResult


@dataclass
class AnalysisReport:
    config: AnalysisConfig
    n_selected: int
    buckets: list[BucketStats]
    histogram: Histogram
    ratio_correlation: CorrelationResult | None
    category_correlations: dict[str, CorrelationResult | None]
    severity_correlation: CorrelationResult | None
    adjacent_tests: list[LabeledTest]
    pooled_tests: list[LabeledTest]
    baseline: str
    category_deltas: dict[str, tuple[float, float, float, float]]
    warnings: list[str] = field(default_factory=list)


def build_profiles(
    corpus: Corpus,
    config: AnalysisConfig,
    paper_ids: Iterable[str],
    background: BackgroundDistribution | None = None,
) -> dict[tuple[str, int], ExpertiseVector]:
    """Expertise vectors for every (author, year) pair the papers need."""
    if background is None:
        background = background_distribution(corpus)
    profiles: dict[tuple[str, int], ExpertiseVector] = {}
    for paper_id in paper_ids:
        paper = corpus.by_id[paper_id]
        for author in paper.authors:
            key = (author, paper.year)
            if key not in profiles:
                profiles[key] = profile_author(
                    corpus, background, author, paper.year, config
                )
    return profiles


def _score_batch(
    batch: Sequence[tuple[str, list[ExpertiseVector]]],
    threshold: float,
    inclusive: bool,
) -> list[PaperDiversity]:
    return [
        paper_diversity(paper_id, team, threshold, inclusive=inclusive)
        for paper_id, team in batch
    ]


def compute_paper_metrics(
    corpus: Corpus,
    config: AnalysisConfig,
    paper_ids: Iterable[str],
    profiles: Mapping[tuple[str, int], ExpertiseVector] | None = None,
    jobs: int = 1,
) -> list[PaperDiversity]:
    """Diversity metrics for the given papers, ordered by paper id.

    ``jobs`` > 1 spreads the per-paper work over worker processes; the
    output is identical regardless of the level of parallelism.
    """
    ordered = sorted(paper_ids)
    if profiles is None:
        profiles = build_profiles(corpus, config, ordered)
    tasks = []
    for paper_id in ordered:
        paper = corpus.by_id[paper_id]
        team = [profiles[(author, paper.year)] for author in paper.authors]
        tasks.append((paper_id, team))
    threshold = config.edge_threshold
    inclusive = config.inclusive_threshold
    if jobs <= 1 or len(tasks) < 2 * jobs:
        return _score_batch(tasks, threshold, inclusive)
    chunk = max(1, math.ceil(len(tasks) / (jobs * 4)))
    batches = [tasks[i : i + chunk] for i in range(0, len(tasks), chunk)]
    metrics: list[PaperDiversity] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for result in pool.map(
            _score_batch,
            batches,
            [threshold] * len(batches),
            [inclusive] * len(batches),
        ):
            metrics.extend(result)
    return metrics


def max_distance_histogram(
    distances: Sequence[float],
    bin_width: float = DEFAULT_BIN_WIDTH,
    epsilon: float = DEFAULT_EPSILON,
) -> Histogram:
    """Histogram of max distances with separate exact-0/exact-1 spikes."""
    if not 0.0 < bin_width <= 1.0:
        raise ValueError("bin_width must lie in (0, 1]")
    n_bins = int(math.ceil(1.0 / bin_width - 1e-9))
    counts = [0] * n_bins
    zero_count = 0
    one_count = 0
    for d in distances:
        if d <= epsilon:
            zero_count += 1
        elif d >= 1.0 - epsilon:
            one_count += 1
        else:
            idx = min(int(d / bin_width), n_bins - 1)
            counts[idx] += 1
    return Histogram(
        bin_width=bin_width,
        zero_count=zero_count,
        one_count=one_count,
        bin_counts=tuple(counts),
    )


def ratio_vs_median_correlation(stats: Sequence[BucketStats]) -> CorrelationResult:
    """Pearson r of (citation median, #1/#0 ratio) pairs in bucket order."""
    pairs = [
        (s.citation_median, s.one_zero_ratio)
        for s in stats
        if s.citation_median is not None and s.one_zero_ratio is not None
    ]
    if len(pairs) < 3:
        raise ValueError(f"need at least 3 buckets with defined ratios, got {len(pairs)}")
    return pearson([m for m, _ in pairs], [r for _, r in pairs])


def category_delta_vs_baseline(
    stats: Sequence[BucketStats], baseline: str
) -> dict[str, tuple[float, float, float, float]]:
    """Percentage-point deltas of each bucket's category shares vs a baseline."""
    base = next((s for s in stats if s.label == baseline), None)
    if base is None:
        raise ValueError(f"baseline bucket {baseline!r} not present")
    base_pct = base.category_percentages
    if base_pct is None:
        raise ValueError(f"baseline bucket {baseline!r} is empty")
    deltas: dict[str, tuple[float, float, float, float]] = {}
    for s in stats:
        pct = s.category_percentages
        if pct is None:
            continue
        deltas[s.label] = tuple(p - b for p, b in zip(pct, base_pct))
    return deltas


def adjacent_and_pooled_tests(stats: Sequence[BucketStats]) -> list[LabeledTest]:
    """Chi-square homogeneity over adjacent bucket pairs plus two pooled splits."""
    usable = [s for s in stats if s.n_papers > 0]
    if len(usable) < 2:
        raise ValueError("need at least 2 nonempty buckets")
    tests = []
    for a, b in zip(usable, usable[1:]):
        tests.append(
            LabeledTest(
                label=f"{a.label} vs {b.label}",
                result=chi_square_homogeneity(a.category_counts, b.category_counts),
            )
        )
    rest = [list(s.category_counts) for s in usable[1:]]
    pooled_rest = [sum(col) for col in zip(*rest)]
    tests.append(
        LabeledTest(
            label=f"{usable[0].label} vs pooled {usable[1].label}-{usable[-1].label}",
            result=chi_square_homogeneity(usable[0].category_counts, pooled_rest),
        )
    )
    if len(usable) >= 3:
        head = [list(s.category_counts) for s in usable[:2]]
        tail = [list(s.category_counts) for s in usable[2:]]
        pooled_head = [sum(col) for col in zip(*head)]
        pooled_tail = [sum(col) for col in zip(*tail)]
        tests.append(
            LabeledTest(
                label=(
                    f"pooled {usable[0].label}-{usable[1].label} vs "
                    f"pooled {usable[2].label}-{usable[-1].label}"
                ),
                result=chi_square_homogeneity(pooled_head, pooled_tail),
            )
        )
    return tests


def aggregate_report(
    corpus: Corpus,
    config: AnalysisConfig,
    metrics: Sequence[PaperDiversity],
) -> AnalysisReport:
    """Reduce per-paper metrics into the full report.

    Deterministic given corpus and config; metrics may arrive in any order.
    """
    ordered = sorted(metrics, key=lambda m: m.paper_id)
    if not ordered:
        raise EmptyAnalysisSetError("no papers to aggregate")
    warnings: list[str] = []
    buckets = config.buckets
    by_label: dict[str, list[PaperDiversity]] = {b.label: [] for b in buckets}
    citations_by_label: dict[str, list[int]] = {b.label: [] for b in buckets}
    all_distances: list[float] = []
    for m in ordered:
        paper = corpus.by_id[m.paper_id]
        if paper.citations_5y is None:
            raise ValueError(f"paper {m.paper_id!r} has no citation count")
        bucket = None
        for b in buckets:
            if b.contains(paper.citations_5y):
                bucket = b
                break
        if bucket is None:
            raise ValueError(f"paper {m.paper_id!r} fits no citation bucket")
        by_label[bucket.label].append(m)
        citations_by_label[bucket.label].append(paper.citations_5y)
        if m.max_distance is not None:
            all_distances.append(m.max_distance)

    bucket_stats: list[BucketStats] = []
    for b in buckets:
        members = by_label[b.label]
        if not members:
            warnings.append(f"bucket {b.label} is empty; derived statistics undefined")
            bucket_stats.append(
                BucketStats(
                    bucket=b,
                    n_papers=0,
                    citation_median=None,
                    zeros=0,
                    ones=0,
                    category_counts=(0, 0, 0, 0),
                )
            )
            continue
        distances = [m.max_distance for m in members if m.max_distance is not None]
        oz = one_zero_counts(distances)
        cat_counts = [0, 0, 0, 0]
        for m in members:
            cat_counts[CATEGORIES.index(m.category)] += 1
        bucket_stats.append(
            BucketStats(
                bucket=b,
                n_papers=len(members),
                citation_median=median(citations_by_label[b.label]),
                zeros=oz.zeros,
                ones=oz.ones,
                category_counts=tuple(cat_counts),
            )
        )

    for s in bucket_stats:
        if s.n_papers > 0 and s.one_zero_ratio is None:
            warnings.append(f"bucket {s.label} has no exact-0 papers; ratio undefined")

    try:
        ratio_corr = ratio_vs_median_correlation(bucket_stats)
    except ValueError as exc:
        warnings.append(f"ratio correlation unavailable: {exc}")
        ratio_corr = None

    usable = [
        s
        for s in bucket_stats
        if s.n_papers > 0 and s.citation_median is not None
    ]
    medians = [s.citation_median for s in usable]
    category_correlations: dict[str, CorrelationResult | None] = {}
    for i, category in enumerate(CATEGORIES):
        shares = [s.category_percentages[i] for s in usable]
        try:
            category_correlations[category.value] = pearson(medians, shares)
        except ValueError as exc:
            warnings.append(f"{category.value} share correlation unavailable: {exc}")
            category_correlations[category.value] = None

    severity_pairs = [
        (s.citation_median, s.severity_ratio)
        for s in usable
        if s.severity_ratio is not None
    ]
    severity_corr = None
    if len(severity_pairs) >= 3:
        try:
            severity_corr = pearson(
                [m for m, _ in severity_pairs], [r for _, r in severity_pairs]
            )
        except ValueError as exc:
            warnings.append(f"severity ratio correlation unavailable: {exc}")
    else:
        warnings.append("severity ratio correlation unavailable: fewer than 3 buckets")

    n_nonempty = sum(1 for s in bucket_stats if s.n_papers > 0)
    try:
        tests = adjacent_and_pooled_tests(bucket_stats)
    except ValueError as exc:
        warnings.append(f"chi-square tests unavailable: {exc}")
        tests = []
    adjacent = tests[: max(n_nonempty - 1, 0)]
    pooled = tests[max(n_nonempty - 1, 0) :]

    baseline = next((s.label for s in bucket_stats if s.n_papers > 0), buckets[0].label)
    try:
        deltas = category_delta_vs_baseline(bucket_stats, baseline)
    except ValueError as exc:
        warnings.append(f"category deltas unavailable: {exc}")
        deltas = {}

    return AnalysisReport(
        config=config,
        n_selected=len(ordered),
        buckets=bucket_stats,
        histogram=max_distance_histogram(all_distances),
        ratio_correlation=ratio_corr,
        category_correlations=category_correlations,
        severity_correlation=severity_corr,
        adjacent_tests=adjacent,
        pooled_tests=pooled,
        baseline=baseline,
        category_deltas=deltas,
        warnings=warnings,
    )


def run_analysis(corpus: Corpus, config: AnalysisConfig, jobs: int = 1) -> AnalysisReport:
    """Full pipeline: select, profile, score each paper, aggregate, test."""
    selected = select_analysis_set(corpus, config)
    if not selected:
        raise EmptyAnalysisSetError("no papers satisfy the selection constraints")
    metrics = compute_paper_metrics(corpus, config, selected, jobs=jobs)
    return aggregate_report(corpus, config, metrics)


# ---------- rendering ----------

ALL_FORMATS = ("csv", "markdown", "svg")


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _opt_repr(value: float | None) -> str:
    return "" if value is None else repr(value)


def _render_tables(report: AnalysisReport, tables_dir: Path) -> list[Path]:
    tables_dir.mkdir(parents=True, exist_ok=True)
    t1 = tables_dir / "table1.csv"
    _write_csv(
        t1,
        ["bucket", "citation_range", "citation_median", "n_papers"],
        [
            [s.label, s.bucket.range_text(), _opt_repr(s.citation_median), s.n_papers]
            for s in report.buckets
        ],
    )
    t2 = tables_dir / "table2.csv"
    _write_csv(
        t2,
        ["bucket", "zeros", "ones", "one_zero_ratio"],
        [[s.label, s.zeros, s.ones, _opt_repr(s.one_zero_ratio)] for s in report.buckets],
    )
    t3 = tables_dir / "table3.csv"
    cat_names = [c.value for c in CATEGORIES]
    header = (
        ["bucket"]
        + cat_names
        + [f"{c}_pct" for c in cat_names]
        + ["n_papers", "severity_ratio"]
    )
    rows = []
    for s in report.buckets:
        pct = s.category_percentages or (None, None, None, None)
        rows.append(
            [s.label]
            + list(s.category_counts)
            + [_opt_repr(p) for p in pct]
            + [s.n_papers, _opt_repr(s.severity_ratio)]
        )
    _write_csv(t3, header, rows)
    return [t1, t2, t3]


def _corr_text(result: CorrelationResult | None) -> str:
    if result is None:
        return "undefined"
    verdict = "significant" if result.significant else "not significant"
    return f"r = {result.r:.3f}, p = {result.p_value:.3g} ({verdict})"


def _render_markdown(report: AnalysisReport, path: Path) -> Path:
    lines = ["# Team expertise-diversity analysis", ""]
    lines.append(f"Papers analysed: {report.n_selected}")
    lines.append("")
    lines.append("## Citation buckets")
    lines.append("")
    lines.append("| bucket | citation range | median | papers |")
    lines.append("| --- | --- | --- | --- |")
    for s in report.buckets:
        med = "" if s.citation_median is None else f"{s.citation_median:g}"
        lines.append(f"| {s.label} | {s.bucket.range_text()} | {med} | {s.n_papers} |")
    lines.append("")
    lines.append("## Exact-0 and exact-1 max-distance counts")
    lines.append("")
    lines.append("| bucket | #0 | #1 | #1/#0 |")
    lines.append("| --- | --- | --- | --- |")
    for s in report.buckets:
        ratio = "" if s.one_zero_ratio is None else f"{s.one_zero_ratio:.2f}"
        lines.append(f"| {s.label} | {s.zeros} | {s.ones} | {ratio} |")
    lines.append("")
    lines.append("## Diversity category shares")
    lines.append("")
    lines.append("| bucket | low | moderate | high | very high | papers | (high+very)/low |")
    lines.append("| --- | --- | --- | --- | --- | --- | --- |")
    for s in report.buckets:
        pct = s.category_percentages
        if pct is None:
            cells = ["", "", "", ""]
        else:
            cells = [f"{p:.2f}%" for p in pct]
        sev = "" if s.severity_ratio is None else f"{s.severity_ratio:.2f}"
        lines.append(
            f"| {s.label} | {cells[0]} | {cells[1]} | {cells[2]} | {cells[3]} "
            f"| {s.n_papers} | {sev} |"
        )
    lines.append("")
    lines.append("## Association tests")
    lines.append("")
    lines.append(f"- #1/#0 ratio vs citation median: {_corr_text(report.ratio_correlation)}")
    for name, corr in report.category_correlations.items():
        lines.append(f"- {name} share vs citation median: {_corr_text(corr)}")
    lines.append(
        f"- (high+very)/low ratio vs citation median: {_corr_text(report.severity_correlation)}"
    )
    lines.append("")
    lines.append("| comparison | chi-square | df | p | significant |")
    lines.append("| --- | --- | --- | --- | --- |")
    for t in report.adjacent_tests + report.pooled_tests:
        r = t.result
        lines.append(
            f"| {t.label} | {r.statistic:.3f} | {r.df} | {r.p_value:.3g} "
            f"| {'yes' if r.significant else 'no'} |"
        )
    lines.append("")
    lines.append(f"## Category share deltas vs bucket {report.baseline}")
    lines.append("")
    lines.append("| bucket | low | moderate | high | very high |")
    lines.append("| --- | --- | --- | --- | --- |")
    for label, delta in report.category_deltas.items():
        cells = " | ".join(f"{d:+.2f}" for d in delta)
        lines.append(f"| {label} | {cells} |")
    lines.append("")
    h = report.histogram
    lines.append("## Max-distance histogram")
    lines.append("")
    lines.append(
        f"Exact 0: {h.zero_count}; exact 1: {h.one_count}; "
        f"interior values: {sum(h.bin_counts)} in bins of width {h.bin_width:g}."
    )
    if report.warnings:
        lines.append("")
        lines.append("## Warnings")
        lines.append("")
        for w in report.warnings:
            lines.append(f"- {w}")
    lines.append("")
    path.write_text("\n".join(lines), encoding="utf-8")
    return path


def _render_figures(report: AnalysisReport, figures_dir: Path) -> list[Path]:
    figures_dir.mkdir(parents=True, exist_ok=True)
    h = report.histogram
    labels = ["0"]
    values = [float(h.zero_count)]
    for i, count in enumerate(h.bin_counts):
        labels.append(f"{i * h.bin_width:.2f}")
        values.append(float(count))
    labels.append("1")
    values.append(float(h.one_count))
    fig2 = figures_dir / "fig2.svg"
    fig2.write_text(
        svgchart.bar_chart(
            labels, values, "Max cosine distance distribution", "max distance", "papers"
        ),
        encoding="utf-8",
    )
    pairs = [
        (s.citation_median, s.one_zero_ratio)
        for s in report.buckets
        if s.citation_median is not None and s.one_zero_ratio is not None
    ]
    fig3 = figures_dir / "fig3.svg"
    fig3.write_text(
        svgchart.scatter_line_chart(
            [m for m, _ in pairs],
            [r for _, r in pairs],
            "#1/#0 ratio vs citation median",
            "citation median (log scale)",
            "#1/#0 ratio",
            log_x=True,
        ),
        encoding="utf-8",
    )
    delta_labels = [l for l in report.category_deltas if l != report.baseline]
    series = [
        [report.category_deltas[l][i] for l in delta_labels] for i in range(len(CATEGORIES))
    ]
    fig4 = figures_dir / "fig4.svg"
    fig4.write_text(
        svgchart.grouped_bar_chart(
            delta_labels,
            [c.value for c in CATEGORIES],
            series,
            f"Category share deltas vs bucket {report.baseline}",
            "bucket",
            "percentage points",
        ),
        encoding="utf-8",
    )
    return [fig2, fig3, fig4]


def render(
    report: AnalysisReport,
    out_dir: str | Path,
    formats: Sequence[str] = ALL_FORMATS,
) -> list[Path]:
    """Write tables, figures, the markdown report, and the config echo.

    Output is byte-identical across reruns with the same report.
    """
    unknown = set(formats) - set(ALL_FORMATS)
    if unknown:
        raise ValueError(f"unknown render formats: {sorted(unknown)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if "csv" in formats:
        written.extend(_render_tables(report, out / "tables"))
    if "markdown" in formats:
        written.append(_render_markdown(report, out / "report.md"))
    if "svg" in formats:
        written.extend(_render_figures(report, out / "figures"))
    config_path = out / "config.json"
    config_path.write_text(
        json.dumps(report.config.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    written.append(config_path)
    return written
