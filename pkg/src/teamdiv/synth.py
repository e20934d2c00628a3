"""Synthetic corpora with controllable diversity-citation coupling.

Authors live in expertise clusters with disjoint topic sets. Each
analysis paper samples a team spanning a random number of clusters;
its citation count is drawn from a heavy-tailed negative binomial whose
location rises with the team's cluster count when coupling > 0 and is
flat at coupling = 0. Every analysis paper satisfies the default
selection constraints by construction (backfill records cover each
author's expertise window).

A small share of filler records with a reserved off-cluster topic keeps
every core topic's corpus-wide share strictly below 1, so background
subtraction never wipes out author profiles even in a one-cluster world.

All draws come from one numpy PCG64 generator, so a fixed seed yields a
byte-identical corpus; params.json echoes the algorithm identifier.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .corpus import Corpus, PaperRecord

RNG_ALGORITHM = "numpy-pcg64"

# citation model constants: location of the negative binomial at cluster
# count 1, and the per-extra-cluster log-location gain at coupling 1
_BASE_MEAN_CITATIONS = 20.0
_COUPLING_GAIN = 1.1
_MIN_CITATIONS = 2

# geometric decay of the team cluster-count distribution
_CLUSTER_COUNT_DECAY = 0.45

# chance of a second window paper per author backfill
_SECOND_BACKFILL_P = 0.6

# expertise window the backfill guarantee targets (the analysis default)
_WINDOW_YEARS = 5

# share of filler records diluting the topic background
_FILLER_SHARE = 0.02

DEFAULT_TEAM_SIZES: Mapping[int, float] = {
    2: 0.35,
    3: 0.30,
    4: 0.18,
    5: 0.09,
    6: 0.05,
    7: 0.03,
}


class InfeasibleParamsError(ValueError):
    """Generation parameters that cannot produce a valid corpus."""


@dataclass(frozen=True)
class SynthParams:
    seed: int = 0
    n_authors: int = 3000
    n_topics: int = 200
    n_papers: int = 5000
    year_range: tuple[int, int] = (2010, 2015)
    team_size_distribution: Mapping[int, float] = field(
        default_factory=lambda: dict(DEFAULT_TEAM_SIZES)
    )
    n_expertise_clusters: int = 20
    cluster_mix: float = 0.1
    coupling: float = 0.0
    citation_noise: float = 0.35

    def __post_init__(self):
        if self.n_authors < 2 or self.n_topics < 1 or self.n_papers < 1:
            raise InfeasibleParamsError("counts must be positive (>=2 authors)")
        if self.year_range[0] > self.year_range[1]:
            raise InfeasibleParamsError("year_range start exceeds end")
        sizes = self.team_size_distribution
        if not sizes:
            raise InfeasibleParamsError("team_size_distribution is empty")
        if any(s < 2 or s > 12 for s in sizes):
            raise InfeasibleParamsError("team sizes must lie in {2..12}")
        if any(p < 0 for p in sizes.values()) or not math.isclose(
            sum(sizes.values()), 1.0, abs_tol=1e-9
        ):
            raise InfeasibleParamsError("team size probabilities must be >=0 and sum to 1")
        if max(sizes) > self.n_authors:
            raise InfeasibleParamsError("largest team size exceeds n_authors")
        if not 1 <= self.n_expertise_clusters <= self.n_topics:
            raise InfeasibleParamsError("need 1 <= n_expertise_clusters <= n_topics")
        if not 0.0 <= self.cluster_mix <= 1.0:
            raise InfeasibleParamsError("cluster_mix must lie in [0, 1]")
        if not -1.0 <= self.coupling <= 1.0:
            raise InfeasibleParamsError("coupling must lie in [-1, 1]")
        if self.citation_noise <= 0:
            raise InfeasibleParamsError("citation_noise must be positive")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_authors": self.n_authors,
            "n_topics": self.n_topics,
            "n_papers": self.n_papers,
            "year_range": list(self.year_range),
            "team_size_distribution": {str(k): v for k, v in sorted(self.team_size_distribution.items())},
            "n_expertise_clusters": self.n_expertise_clusters,
            "cluster_mix": self.cluster_mix,
            "coupling": self.coupling,
            "citation_noise": self.citation_noise,
            "rng": RNG_ALGORITHM,
        }


def write_params(params: SynthParams, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(params.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _cluster_cores(params: SynthParams) -> list[tuple[str, ...]]:
    topics = [f"t{i:04d}" for i in range(params.n_topics)]
    c = params.n_expertise_clusters
    bounds = np.linspace(0, params.n_topics, c + 1).astype(int)
    return [tuple(topics[bounds[i] : bounds[i + 1]]) for i in range(c)]


def _cluster_count_cdf(m_max: int) -> list[float]:
    weights = [_CLUSTER_COUNT_DECAY**k for k in range(m_max)]
    total = sum(weights)
    cdf = []
    acc = 0.0
    for w in weights:
        acc += w / total
        cdf.append(acc)
    return cdf


def _distinct_clusters(rng: np.random.Generator, n_clusters: int, m: int) -> list[int]:
    if m >= n_clusters:
        return list(range(n_clusters))
    chosen: list[int] = []
    seen = set()
    while len(chosen) < m:
        c = int(rng.integers(n_clusters))
        if c not in seen:
            seen.add(c)
            chosen.append(c)
    return chosen


def generate_corpus(params: SynthParams) -> Corpus:
    """Build a corpus of backfill records plus analysis papers.

    Deterministic for a fixed seed. The returned corpus round-trips
    through the JSONL schema unchanged.
    """
    rng = np.random.default_rng(params.seed)
    cores = _cluster_cores(params)
    n_clusters = params.n_expertise_clusters
    authors = [f"a{i:06d}" for i in range(params.n_authors)]
    home = [i % n_clusters for i in range(params.n_authors)]
    cluster_members: list[list[int]] = [[] for _ in range(n_clusters)]
    for i, h in enumerate(home):
        cluster_members[h].append(i)
    if any(not members for members in cluster_members):
        raise InfeasibleParamsError("more clusters than authors")

    size_values = sorted(params.team_size_distribution)
    size_probs = [params.team_size_distribution[s] for s in size_values]
    cdf_by_max = {m: _cluster_count_cdf(m) for m in range(1, 13)}

    y0, y1 = params.year_range
    filler_topic = f"t{params.n_topics:04d}"
    n_filler = max(1, int(params.n_papers * _FILLER_SHARE))
    filler_years = rng.integers(y0, y1 + 1, size=n_filler)
    filler_records = [
        PaperRecord(
            id=f"f{i:05d}",
            year=int(filler_years[i]),
            authors=("filler",),
            topics=frozenset([filler_topic]),
        )
        for i in range(n_filler)
    ]
    years = rng.integers(y0, y1 + 1, size=params.n_papers)
    sizes = rng.choice(size_values, size=params.n_papers, p=size_probs)
    m_draws = rng.random(params.n_papers)

    # backfill_years[author] holds years of already-scheduled window papers
    backfill_years: list[list[int]] = [[] for _ in range(params.n_authors)]
    backfill_records: list[PaperRecord] = []

    def add_backfill(author_idx: int, year: int) -> None:
        if rng.random() < params.cluster_mix and n_clusters > 1:
            c = int(rng.integers(n_clusters - 1))
            if c >= home[author_idx]:
                c += 1
        else:
            c = home[author_idx]
        backfill_records.append(
            PaperRecord(
                id=f"b{len(backfill_records):07d}",
                year=year,
                authors=(authors[author_idx],),
                topics=frozenset(cores[c]),
            )
        )
        backfill_years[author_idx].append(year)

    def ensure_window(author_idx: int, year: int) -> None:
        lo, hi = year - _WINDOW_YEARS, year - 1
        if any(lo <= y <= hi for y in backfill_years[author_idx]):
            return
        add_backfill(author_idx, year - 1 - int(rng.integers(3)))
        if rng.random() < _SECOND_BACKFILL_P:
            add_backfill(author_idx, year - 1 - int(rng.integers(3)))

    teams: list[list[int]] = []
    primary_clusters: list[int] = []
    cluster_counts = np.empty(params.n_papers, dtype=np.int64)
    for i in range(params.n_papers):
        size = int(sizes[i])
        year = int(years[i])
        m_max = min(size, n_clusters)
        cdf = cdf_by_max[m_max]
        u = m_draws[i]
        m = next(k + 1 for k, edge in enumerate(cdf) if u <= edge)
        clusters = _distinct_clusters(rng, n_clusters, m)
        team: list[int] = []
        taken = set()
        for slot in range(size):
            c = clusters[slot] if slot < m else clusters[int(rng.integers(m))]
            members = cluster_members[c]
            author_idx = None
            for _ in range(50):
                candidate = members[int(rng.integers(len(members)))]
                if candidate not in taken:
                    author_idx = candidate
                    break
            if author_idx is None:
                author_idx = next((a for a in members if a not in taken), None)
            if author_idx is None:
                # cluster exhausted; fall back to any free author
                author_idx = next(a for a in range(params.n_authors) if a not in taken)
            taken.add(author_idx)
            team.append(author_idx)
            ensure_window(author_idx, year)
        teams.append(team)
        primary_clusters.append(clusters[0])
        cluster_counts[i] = m

    mu = _BASE_MEAN_CITATIONS * np.exp(
        _COUPLING_GAIN * params.coupling * (cluster_counts - 1)
    )
    shape = params.citation_noise
    draws = rng.negative_binomial(shape, shape / (shape + mu))
    citations = _MIN_CITATIONS + draws

    analysis_records = [
        PaperRecord(
            id=f"p{i:06d}",
            year=int(years[i]),
            authors=tuple(authors[a] for a in teams[i]),
            topics=frozenset(cores[primary_clusters[i]]),
            citations_5y=int(citations[i]),
        )
        for i in range(params.n_papers)
    ]
    return Corpus.from_papers(filler_records + backfill_records + analysis_records)
