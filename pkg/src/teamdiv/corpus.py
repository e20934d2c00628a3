"""Publication records: parsing, validation, indexing, selection, buckets.

The on-disk format is JSONL, one record per line:

    {"id": str, "year": int, "authors": [str, ...], "topics": [str, ...],
     "citations_5y": int}

``citations_5y`` may be omitted (records that only feed expertise windows).
Unknown keys are ignored.
"""
from __future__ import annotations

import json
import logging
from bisect import bisect_left
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

log = logging.getLogger(__name__)

DEFAULT_BUCKET_BOUNDS: tuple[tuple[int, int | None], ...] = (
    (2, 5),
    (5, 10),
    (10, 15),
    (15, 20),
    (20, 30),
    (30, 40),
    (40, 50),
    (50, 100),
    (100, 150),
    (150, None),
)


class CorpusValidationError(ValueError):
    """A record in the input stream violates the corpus schema."""

    def __init__(self, position: int, message: str):
        super().__init__(f"record {position}: {message}")
        self.position = position
        self.reason = message


class ConfigError(ValueError):
    """An analysis configuration violates its invariants."""


@dataclass(frozen=True, slots=True)
class PaperRecord:
    id: str
    year: int
    authors: tuple[str, ...]
    topics: frozenset[str]
    citations_5y: int | None = None


@dataclass(frozen=True, slots=True)
class CitationBucket:
    """One half-open citation range [lo, hi); hi None means unbounded."""

    label: str
    lo: int
    hi: int | None

    def contains(self, citations: int) -> bool:
        if citations < self.lo:
            return False
        return self.hi is None or citations < self.hi

    def range_text(self) -> str:
        if self.hi is None:
            return f"c >= {self.lo}"
        return f"{self.lo} <= c < {self.hi}"


def _bucket_label(index: int) -> str:
    # Spreadsheet-style labels: A..Z, AA, AB, ...
    label = ""
    index += 1
    while index > 0:
        index, rem = divmod(index - 1, 26)
        label = chr(ord("A") + rem) + label
    return label


@dataclass(frozen=True)
class AnalysisConfig:
    window_years: int = 5
    top_k: int = 10
    edge_threshold: float = 0.3
    year_range: tuple[int, int] = (2010, 2015)
    min_citations: int = 2
    min_authors: int = 2
    bucket_bounds: tuple[tuple[int, int | None], ...] = DEFAULT_BUCKET_BOUNDS
    inclusive_threshold: bool = False

    def __post_init__(self):
        if self.window_years < 1:
            raise ConfigError("window_years must be >= 1")
        if self.top_k < 1:
            raise ConfigError("top_k must be >= 1")
        if not 0.0 <= self.edge_threshold <= 1.0:
            raise ConfigError("edge_threshold must lie in [0, 1]")
        if self.year_range[0] > self.year_range[1]:
            raise ConfigError("year_range start exceeds end")
        if self.min_authors < 1:
            raise ConfigError("min_authors must be >= 1")
        if not self.bucket_bounds:
            raise ConfigError("bucket_bounds must be nonempty")
        expected_lo = self.min_citations
        for i, (lo, hi) in enumerate(self.bucket_bounds):
            last = i == len(self.bucket_bounds) - 1
            if lo != expected_lo:
                raise ConfigError(
                    f"bucket_bounds must be contiguous from min_citations: "
                    f"range {i} starts at {lo}, expected {expected_lo}"
                )
            if last:
                if hi is not None:
                    raise ConfigError("last bucket must be unbounded above")
            else:
                if hi is None or hi <= lo:
                    raise ConfigError(f"bucket range {i} is empty or unordered")
                expected_lo = hi

    @property
    def buckets(self) -> tuple[CitationBucket, ...]:
        return tuple(
            CitationBucket(label=_bucket_label(i), lo=lo, hi=hi)
            for i, (lo, hi) in enumerate(self.bucket_bounds)
        )

    def to_dict(self) -> dict:
        return {
            "window_years": self.window_years,
            "top_k": self.top_k,
            "edge_threshold": self.edge_threshold,
            "year_range": list(self.year_range),
            "min_citations": self.min_citations,
            "min_authors": self.min_authors,
            "bucket_bounds": [list(b) for b in self.bucket_bounds],
            "inclusive_threshold": self.inclusive_threshold,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "AnalysisConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(data)
        if "year_range" in kwargs:
            kwargs["year_range"] = tuple(kwargs["year_range"])
        if "bucket_bounds" in kwargs:
            kwargs["bucket_bounds"] = tuple(tuple(b) for b in kwargs["bucket_bounds"])
        return cls(**kwargs)


@dataclass
class Corpus:
    """Immutable snapshot of parsed publication records.

    ``author_index`` maps each author to (year, paper_id) pairs sorted by
    (year, paper_id); it is exactly the inverse of the authorship relation.
    """

    papers: tuple[PaperRecord, ...]
    by_id: dict[str, PaperRecord] = field(repr=False)
    author_index: dict[str, list[tuple[int, str]]] = field(repr=False)
    skipped: int = 0

    def __len__(self) -> int:
        return len(self.papers)

    @classmethod
    def from_papers(cls, papers: Sequence[PaperRecord], skipped: int = 0) -> "Corpus":
        by_id = {p.id: p for p in papers}
        return cls(
            papers=tuple(papers),
            by_id=by_id,
            author_index=build_author_index(papers),
            skipped=skipped,
        )


def build_author_index(papers: Iterable[PaperRecord]) -> dict[str, list[tuple[int, str]]]:
    index: dict[str, list[tuple[int, str]]] = {}
    for paper in papers:
        for author in paper.authors:
            index.setdefault(author, []).append((paper.year, paper.id))
    for entries in index.values():
        entries.sort()
    return index


def _coerce_record(position: int, raw: Mapping) -> PaperRecord:
    if not isinstance(raw, Mapping):
        raise CorpusValidationError(position, "record is not an object")
    paper_id = raw.get("id")
    if not isinstance(paper_id, str) or not paper_id:
        raise CorpusValidationError(position, "missing or empty id")
    year = raw.get("year")
    if isinstance(year, bool) or not isinstance(year, int):
        raise CorpusValidationError(position, f"non-integer year in {paper_id!r}")
    authors = raw.get("authors")
    if not isinstance(authors, (list, tuple)) or not authors:
        raise CorpusValidationError(position, f"empty authors in {paper_id!r}")
    if not all(isinstance(a, str) and a for a in authors):
        raise CorpusValidationError(position, f"blank author id in {paper_id!r}")
    if len(set(authors)) != len(authors):
        raise CorpusValidationError(position, f"duplicate author within {paper_id!r}")
    topics = raw.get("topics")
    if not isinstance(topics, (list, tuple)) or not topics:
        raise CorpusValidationError(position, f"empty topics in {paper_id!r}")
    if not all(isinstance(t, str) and t for t in topics):
        raise CorpusValidationError(position, f"blank topic id in {paper_id!r}")
    citations = raw.get("citations_5y")
    if citations is not None:
        if isinstance(citations, bool) or not isinstance(citations, int) or citations < 0:
            raise CorpusValidationError(
                position, f"citations_5y must be a nonnegative integer in {paper_id!r}"
            )
    return PaperRecord(
        id=paper_id,
        year=year,
        authors=tuple(authors),
        topics=frozenset(topics),
        citations_5y=citations,
    )


def parse_corpus(records: Iterable[Mapping], strict: bool = True) -> Corpus:
    """Validate a stream of raw records and build an indexed corpus.

    In strict mode the first invalid record aborts the parse; in lenient
    mode invalid records are skipped with a logged warning and counted in
    ``Corpus.skipped``. Record order is preserved.
    """
    papers: list[PaperRecord] = []
    seen: set[str] = set()
    skipped = 0
    for position, raw in enumerate(records, start=1):
        try:
            paper = _coerce_record(position, raw)
            if paper.id in seen:
                raise CorpusValidationError(position, f"duplicate paper id {paper.id!r}")
        except CorpusValidationError as exc:
            if strict:
                raise
            skipped += 1
            log.warning("skipping invalid record: %s", exc)
            continue
        seen.add(paper.id)
        papers.append(paper)
    return Corpus.from_papers(papers, skipped=skipped)


def iter_jsonl(path: str | Path) -> Iterator[Mapping]:
    """Yield one decoded object per nonempty line."""
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusValidationError(lineno, f"invalid JSON: {exc}") from exc


def load_corpus(path: str | Path, strict: bool = True) -> Corpus:
    return parse_corpus(iter_jsonl(path), strict=strict)


def collect_problems(records: Iterable[Mapping]) -> list[CorpusValidationError]:
    """Scan a record stream and report every schema violation."""
    problems: list[CorpusValidationError] = []
    seen: set[str] = set()
    for position, raw in enumerate(records, start=1):
        try:
            paper = _coerce_record(position, raw)
        except CorpusValidationError as exc:
            problems.append(exc)
            continue
        if paper.id in seen:
            problems.append(CorpusValidationError(position, f"duplicate paper id {paper.id!r}"))
        else:
            seen.add(paper.id)
    return problems


def validate_jsonl(path: str | Path) -> list[CorpusValidationError]:
    """Report every violation in a JSONL file, keyed by line number."""
    problems: list[CorpusValidationError] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append(CorpusValidationError(lineno, f"invalid JSON: {exc}"))
                continue
            try:
                paper = _coerce_record(lineno, raw)
            except CorpusValidationError as exc:
                problems.append(exc)
                continue
            if paper.id in seen:
                problems.append(
                    CorpusValidationError(lineno, f"duplicate paper id {paper.id!r}")
                )
            else:
                seen.add(paper.id)
    return problems


def record_to_dict(paper: PaperRecord) -> dict:
    data: dict = {
        "id": paper.id,
        "year": paper.year,
        "authors": list(paper.authors),
        "topics": sorted(paper.topics),
    }
    if paper.citations_5y is not None:
        data["citations_5y"] = paper.citations_5y
    return data


def write_corpus_jsonl(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for paper in corpus.papers:
            handle.write(json.dumps(record_to_dict(paper), sort_keys=True))
            handle.write("\n")


def prior_window(corpus: Corpus, author: str, year: int, window_years: int) -> list[str]:
    """Paper ids the author published in [year - window_years, year - 1].

    Unknown authors yield an empty list. Results are sorted by year.
    """
    entries = corpus.author_index.get(author)
    if not entries:
        return []
    lo = bisect_left(entries, (year - window_years,))
    hi = bisect_left(entries, (year,))
    return [paper_id for _, paper_id in entries[lo:hi]]


def select_analysis_set(corpus: Corpus, config: AnalysisConfig) -> set[str]:
    """Ids of papers satisfying all four selection constraints.

    (i) year inside the configured range; (ii) at least min_citations
    5-year citations (records without a count are excluded); (iii) at
    least min_authors authors; (iv) every author has at least one paper
    in the window_years years before publication.
    """
    start, end = config.year_range
    selected: set[str] = set()
    for paper in corpus.papers:
        if not start <= paper.year <= end:
            continue
        if paper.citations_5y is None or paper.citations_5y < config.min_citations:
            continue
        if len(paper.authors) < config.min_authors:
            continue
        if all(
            prior_window(corpus, author, paper.year, config.window_years)
            for author in paper.authors
        ):
            selected.add(paper.id)
    return selected


def assign_bucket(citations: int, config: AnalysisConfig) -> CitationBucket:
    """The unique citation bucket containing the count."""
    if citations < config.min_citations:
        raise ValueError(
            f"citations {citations} below the minimum of {config.min_citations}"
        )
    for bucket in config.buckets:
        if bucket.contains(citations):
            return bucket
    raise AssertionError("bucket bounds failed to cover a valid citation count")
