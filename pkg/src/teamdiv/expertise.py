"""Author expertise vectors from windowed topic counts.

An author's distribution counts the papers in their recent window that
contain each topic, normalised by the window size. Subtracting the
corpus-wide topic distribution surfaces the topics that set the author
apart; the top-k remaining topics (positive adjusted weight only) form
the expertise vector.

Weights are ratios of integer counts, so the subtraction is carried out
on cross-multiplied integers and rounded only once: an author frequency
of 7/10 against a background of 3/10 comes out as exactly 0.4.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import AnalysisConfig, Corpus, PaperRecord, prior_window


class EmptyDistributionError(ValueError):
    """A topic distribution over zero papers is undefined."""


@dataclass(frozen=True, slots=True)
class TopicDistribution:
    """Paper-containment counts per topic over a set of papers."""

    counts: Mapping[str, int]
    paper_count: int

    def weight(self, topic: str) -> float:
        return self.counts.get(topic, 0) / self.paper_count


# The corpus-wide distribution has the same shape; the alias keeps call
# sites explicit about which role a distribution plays.
BackgroundDistribution = TopicDistribution


@dataclass(frozen=True, slots=True)
class ExpertiseVector:
    """Top-k topics of one author with positive background-adjusted weights.

    ``entries`` is ordered by descending weight (ties by ascending topic id),
    so canonical serialization is deterministic.
    """

    owner: str
    entries: Mapping[str, float]
    k: int

    @property
    def is_empty(self) -> bool:
        return not self.entries


def _count_topics(papers: Iterable[PaperRecord]) -> tuple[dict[str, int], int]:
    counts: dict[str, int] = {}
    n = 0
    for paper in papers:
        n += 1
        for topic in paper.topics:
            counts[topic] = counts.get(topic, 0) + 1
    return counts, n


def topic_distribution(papers: Sequence[PaperRecord]) -> TopicDistribution:
    """Fraction of the given papers containing each topic."""
    counts, n = _count_topics(papers)
    if n == 0:
        raise EmptyDistributionError("topic distribution over zero papers")
    return TopicDistribution(counts=counts, paper_count=n)


def background_distribution(corpus: Corpus) -> BackgroundDistribution:
    """Topic distribution over every paper in the corpus."""
    counts, n = _count_topics(corpus.papers)
    if n == 0:
        raise EmptyDistributionError("background distribution over an empty corpus")
    return TopicDistribution(counts=counts, paper_count=n)


def expertise_vector(
    author_dist: TopicDistribution,
    background: BackgroundDistribution,
    k: int,
    owner: str = "",
) -> ExpertiseVector:
    """Rank the author's topics by background-adjusted weight and keep the top k.

    Topics whose adjusted weight is zero or negative are dropped, even
    inside the top k; the result may therefore be empty. Ties are broken
    by ascending topic id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    na = author_dist.paper_count
    nb = background.paper_count
    denominator = na * nb
    # numerator of (count_a/na - count_b/nb) over the common denominator
    scored = []
    for topic, count_a in author_dist.counts.items():
        numerator = count_a * nb - background.counts.get(topic, 0) * na
        if numerator > 0:
            scored.append((-numerator, topic))
    scored.sort()
    entries = {topic: -neg / denominator for neg, topic in scored[:k]}
    return ExpertiseVector(owner=owner, entries=entries, k=k)


def profile_author(
    corpus: Corpus,
    background: BackgroundDistribution,
    author: str,
    as_of_year: int,
    config: AnalysisConfig,
) -> ExpertiseVector:
    """Expertise vector from the author's papers in the window before as_of_year.

    Authors with no window papers get an empty vector; downstream treats
    them as having no measurable expertise.
    """
    ids = prior_window(corpus, author, as_of_year, config.window_years)
    if not ids:
        return ExpertiseVector(owner=author, entries={}, k=config.top_k)
    papers = [corpus.by_id[i] for i in ids]
    return expertise_vector(topic_distribution(papers), background, config.top_k, owner=author)


def write_profiles(
    path: str | Path,
    profiles: Mapping[tuple[str, int], ExpertiseVector],
) -> None:
    """Dump profiles as JSONL keyed by (author, as_of_year), for audit/caching."""
    with open(path, "w", encoding="utf-8") as handle:
        for (author, year) in sorted(profiles):
            vector = profiles[(author, year)]
            record = {
                "author": author,
                "as_of_year": year,
                "topics": [
                    {"id": topic, "weight": weight}
                    for topic, weight in vector.entries.items()
                ],
            }
            handle.write(json.dumps(record, sort_keys=True))
            handle.write("\n")
