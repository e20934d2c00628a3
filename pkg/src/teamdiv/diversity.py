"""Per-paper diversity metrics over author expertise vectors.

Two metrics per paper: the maximum pairwise cosine distance within the
team, and the number of connected components of the author-similarity
graph (edge when a pair's distance falls below the threshold). Component
counts map onto four ordered diversity categories.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .expertise import ExpertiseVector

# float drift guard at the ends of [0, 1]
_CLAMP = 1e-12


class UndefinedDistanceError(ValueError):
    """Cosine distance to an empty expertise vector is undefined."""


class InsufficientTeamError(ValueError):
    """Fewer than two team members have usable expertise vectors."""


class DiversityCategory(str, Enum):
    LOW = "low"
    MODERATE = "moderate"
    HIGH = "high"
    VERY_HIGH = "very_high"


CATEGORIES: tuple[DiversityCategory, ...] = tuple(DiversityCategory)


@dataclass(frozen=True)
class AuthorSimilarityGraph:
    """Graph over one paper's team; edges join pairs with similar expertise."""

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]


@dataclass(frozen=True, slots=True)
class PaperDiversity:
    """Diversity metrics for one paper.

    ``max_distance`` is None when fewer than two authors had nonempty
    expertise vectors; such papers still get a component count (authors
    without a profile stay as isolated vertices, tallied in
    ``excluded_authors``).
    """

    paper_id: str
    n_authors: int
    pair_count: int
    max_distance: float | None
    n_components: int
    category: DiversityCategory
    excluded_authors: int


def cosine_distance(u: ExpertiseVector, v: ExpertiseVector) -> float:
    """1 - cosine similarity over the union of topics, clamped to [0, 1]."""
    if u.is_empty or v.is_empty:
        raise UndefinedDistanceError(
            f"distance undefined for empty vector ({u.owner!r} vs {v.owner!r})"
        )
    a, b = u.entries, v.entries
    if len(b) < len(a):
        a, b = b, a
    # fsum keeps the dot product independent of summation order, so the
    # distance is exactly symmetric in its arguments
    dot = math.fsum(w * b[t] for t, w in a.items() if t in b)
    norm_u = math.sqrt(math.fsum(w * w for w in u.entries.values()))
    norm_v = math.sqrt(math.fsum(w * w for w in v.entries.values()))
    distance = 1.0 - dot / (norm_u * norm_v)
    # snap float drift onto the exact endpoints so 0/1 counting is stable
    if distance < _CLAMP:
        return 0.0
    if distance > 1.0 - _CLAMP:
        return 1.0
    return distance


def _usable_members(team: Sequence[ExpertiseVector]) -> list[ExpertiseVector]:
    return sorted((v for v in team if not v.is_empty), key=lambda v: v.owner)


def pairwise_distances(team: Sequence[ExpertiseVector]) -> list[float]:
    """All N(N-1)/2 pairwise distances, pairs ordered by author id."""
    members = _usable_members(team)
    if len(members) < 2:
        raise InsufficientTeamError(
            f"need at least 2 members with expertise, got {len(members)}"
        )
    distances = []
    for i, u in enumerate(members):
        for v in members[i + 1 :]:
            distances.append(cosine_distance(u, v))
    return distances


def max_distance(team: Sequence[ExpertiseVector]) -> float:
    return max(pairwise_distances(team))


def build_author_graph(
    team: Sequence[ExpertiseVector],
    threshold: float,
    inclusive: bool = False,
) -> AuthorSimilarityGraph:
    """Connect pairs whose distance is strictly below the threshold.

    ``inclusive`` switches to <= for sensitivity analysis. Members with
    empty vectors become isolated vertices.
    """
    if not team:
        raise ValueError("team must be nonempty")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    vertices = tuple(sorted(v.owner for v in team))
    members = _usable_members(team)
    edges = set()
    for i, u in enumerate(members):
        for v in members[i + 1 :]:
            d = cosine_distance(u, v)
            if d < threshold or (inclusive and d == threshold):
                edges.add((u.owner, v.owner))
    return AuthorSimilarityGraph(vertices=vertices, edges=frozenset(edges))


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {item: item for item in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: str, y: str) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the smaller id as root so component order is deterministic
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def connected_components(graph: AuthorSimilarityGraph) -> tuple[int, dict[str, int]]:
    """Component count and a vertex -> component-index map.

    Indices follow the smallest vertex id contained in each component.
    """
    uf = _UnionFind(graph.vertices)
    for u, v in graph.edges:
        uf.union(u, v)
    membership: dict[str, int] = {}
    root_index: dict[str, int] = {}
    for vertex in sorted(graph.vertices):
        root = uf.find(vertex)
        if root not in root_index:
            root_index[root] = len(root_index)
        membership[vertex] = root_index[root]
    return len(root_index), membership


def categorize(n_components: int) -> DiversityCategory:
    """Map a component count onto the four-level diversity scale."""
    if n_components < 1:
        raise ValueError("component count must be >= 1")
    if n_components <= 2:
        return DiversityCategory.LOW
    if n_components <= 4:
        return DiversityCategory.MODERATE
    if n_components <= 6:
        return DiversityCategory.HIGH
    return DiversityCategory.VERY_HIGH


def paper_diversity(
    paper_id: str,
    team: Sequence[ExpertiseVector],
    threshold: float,
    inclusive: bool = False,
) -> PaperDiversity:
    """Evaluate both metrics and the category for one paper's team."""
    usable = _usable_members(team)
    if len(usable) >= 2:
        distances = pairwise_distances(usable)
        largest = max(distances)
        pair_count = len(distances)
    else:
        largest = None
        pair_count = 0
    graph = build_author_graph(team, threshold, inclusive=inclusive)
    n_components, _ = connected_components(graph)
    return PaperDiversity(
        paper_id=paper_id,
        n_authors=len(team),
        pair_count=pair_count,
        max_distance=largest,
        n_components=n_components,
        category=categorize(n_components),
        excluded_authors=len(team) - len(usable),
    )


_METRIC_FIELDS = (
    "paper_id",
    "n_authors",
    "pair_count",
    "max_distance",
    "n_components",
    "category",
    "excluded_authors",
)


def write_metrics_csv(path: str | Path, metrics: Iterable[PaperDiversity]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(_METRIC_FIELDS)
        for m in metrics:
            writer.writerow(
                [
                    m.paper_id,
                    m.n_authors,
                    m.pair_count,
                    "" if m.max_distance is None else repr(m.max_distance),
                    m.n_components,
                    m.category.value,
                    m.excluded_authors,
                ]
            )


def read_metrics_csv(path: str | Path) -> list[PaperDiversity]:
    metrics = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            metrics.append(
                PaperDiversity(
                    paper_id=row["paper_id"],
                    n_authors=int(row["n_authors"]),
                    pair_count=int(row["pair_count"]),
                    max_distance=float(row["max_distance"]) if row["max_distance"] else None,
                    n_components=int(row["n_components"]),
                    category=DiversityCategory(row["category"]),
                    excluded_authors=int(row["excluded_authors"]),
                )
            )
    return metrics
