import json

import pytest

from teamdiv.corpus import (
    AnalysisConfig,
    ConfigError,
    CorpusValidationError,
    assign_bucket,
    build_author_index,
    collect_problems,
    load_corpus,
    parse_corpus,
    prior_window,
    select_analysis_set,
    validate_jsonl,
    write_corpus_jsonl,
)
from tests.conftest import record


def test_parse_builds_index_over_all_authors():
    records = [
        record("p1", 2010, ["a", "b"], ["t1"]),
        record("p2", 2011, ["b", "c"], ["t2"], citations=4),
        record("p3", 2012, ["c"], ["t3"]),
    ]
    corpus = parse_corpus(records)
    assert len(corpus) == 3
    assert set(corpus.author_index) == {"a", "b", "c"}
    assert [pid for _, pid in corpus.author_index["b"]] == ["p1", "p2"]
    assert corpus.papers[0].id == "p1"  # order preserved


def test_parse_rejects_empty_authors_with_position():
    records = [record("p1", 2010, ["a"], ["t"]), record("p2", 2011, [], ["t"])]
    with pytest.raises(CorpusValidationError, match="record 2.*empty authors"):
        parse_corpus(records)


def test_parse_rejects_duplicate_id_by_name():
    records = [record("p1", 2010, ["a"], ["t"]), record("p1", 2011, ["b"], ["t"])]
    with pytest.raises(CorpusValidationError, match="duplicate paper id 'p1'"):
        parse_corpus(records)


@pytest.mark.parametrize(
    "bad",
    [
        record("p1", "2010", ["a"], ["t"]),
        record("p1", 2010, ["a", "a"], ["t"]),
        record("p1", 2010, ["a"], []),
        record("p1", 2010, ["a"], ["t"], citations=-1),
        {"year": 2010, "authors": ["a"], "topics": ["t"]},
    ],
)
def test_parse_rejects_malformed_records(bad):
    with pytest.raises(CorpusValidationError):
        parse_corpus([bad])


def test_lenient_mode_skips_and_counts():
    records = [
        record("p1", 2010, ["a"], ["t"]),
        record("p2", "bad-year", ["a"], ["t"]),
        record("p1", 2011, ["b"], ["t"]),
    ]
    corpus = parse_corpus(records, strict=False)
    assert len(corpus) == 1
    assert corpus.skipped == 2


def test_unknown_keys_ignored():
    raw = record("p1", 2010, ["a"], ["t"])
    raw["venue"] = "Somewhere"
    corpus = parse_corpus([raw])
    assert corpus.papers[0].id == "p1"


def test_author_index_matches_rebuild(small_corpus):
    assert build_author_index(small_corpus.papers) == small_corpus.author_index


def test_jsonl_round_trip(tmp_path, small_corpus):
    path = tmp_path / "corpus.jsonl"
    write_corpus_jsonl(small_corpus, path)
    again = load_corpus(path)
    assert again.papers == small_corpus.papers
    assert again.author_index == small_corpus.author_index


def test_validate_jsonl_reports_line_numbers(tmp_path):
    path = tmp_path / "corpus.jsonl"
    lines = [
        json.dumps(record("p1", 2010, ["a"], ["t"])),
        "{not json",
        json.dumps(record("p1", 2011, ["b"], ["t"])),
        json.dumps(record("p3", 2011, [], ["t"])),
    ]
    path.write_text("\n".join(lines) + "\n")
    problems = validate_jsonl(path)
    assert [p.position for p in problems] == [2, 3, 4]
    assert "duplicate paper id 'p1'" in str(problems[1])


def test_collect_problems_scans_whole_stream():
    records = [record("p1", 2010, [], ["t"]), record("p2", "x", ["a"], ["t"])]
    problems = collect_problems(records)
    assert len(problems) == 2


# --- prior_window ---


def test_prior_window_excludes_query_year():
    records = [
        record("q1", 2008, ["a"], ["t"]),
        record("q2", 2010, ["a"], ["t"]),
        record("q3", 2013, ["a"], ["t"]),
    ]
    corpus = parse_corpus(records)
    assert prior_window(corpus, "a", 2013, 5) == ["q1", "q2"]


def test_prior_window_unknown_author_is_empty(small_corpus):
    assert prior_window(small_corpus, "nobody", 2013, 5) == []


def test_prior_window_endpoints():
    # window 5 at query year 2015 covers 2010..2014 inclusive
    records = [record(f"y{y}", y, ["a"], ["t"]) for y in range(2008, 2016)]
    corpus = parse_corpus(records)
    ids = prior_window(corpus, "a", 2015, 5)
    assert ids == [f"y{y}" for y in range(2010, 2015)]


def test_prior_window_sorted_by_year():
    records = [
        record("late", 2014, ["a"], ["t"]),
        record("early", 2011, ["a"], ["t"]),
    ]
    corpus = parse_corpus(records)
    assert prior_window(corpus, "a", 2015, 5) == ["early", "late"]


# --- select_analysis_set ---


def test_select_includes_qualifying_paper(small_corpus):
    selected = select_analysis_set(small_corpus, AnalysisConfig())
    assert "p1" in selected  # 2013, 3 citations, 2 authors with priors


def test_select_excludes_single_author(small_corpus):
    assert "p4" not in select_analysis_set(small_corpus, AnalysisConfig())


def test_select_excludes_missing_citations(small_corpus):
    assert "p5" not in select_analysis_set(small_corpus, AnalysisConfig())


def test_select_excludes_author_without_priors():
    records = [
        record("w1", 2012, ["a"], ["t"]),
        record("p1", 2013, ["a", "newcomer"], ["t"], citations=5),
    ]
    corpus = parse_corpus(records)
    assert select_analysis_set(corpus, AnalysisConfig()) == set()


def test_select_year_and_citation_bounds(small_corpus):
    config = AnalysisConfig()
    selected = select_analysis_set(small_corpus, config)
    assert selected == {"p1", "p2", "p3"}
    # out-of-range year excluded
    narrow = AnalysisConfig(year_range=(2014, 2015))
    assert select_analysis_set(small_corpus, narrow) == {"p2", "p3"}


def test_select_monotone_in_constraints(small_corpus):
    base = select_analysis_set(small_corpus, AnalysisConfig())
    relaxed_years = select_analysis_set(
        small_corpus, AnalysisConfig(year_range=(2000, 2020))
    )
    relaxed_citations = select_analysis_set(
        small_corpus,
        AnalysisConfig(min_citations=0, bucket_bounds=((0, 5), (5, None))),
    )
    assert base <= relaxed_years
    assert base <= relaxed_citations


# --- buckets ---


def test_assign_bucket_reference_points():
    config = AnalysisConfig()
    assert assign_bucket(3, config).label == "A"
    assert assign_bucket(5, config).label == "B"  # half-open boundary
    assert assign_bucket(150, config).label == "J"
    assert assign_bucket(10**9, config).label == "J"


def test_assign_bucket_below_minimum():
    with pytest.raises(ValueError, match="below the minimum"):
        assign_bucket(1, AnalysisConfig())


def test_bucket_partition_is_exhaustive():
    config = AnalysisConfig()
    for c in range(2, 1001):
        matches = [b for b in config.buckets if b.contains(c)]
        assert len(matches) == 1, c


def test_custom_bucket_labels_extend_past_z():
    bounds = tuple((i, i + 1) for i in range(30)) + ((30, None),)
    config = AnalysisConfig(min_citations=0, bucket_bounds=bounds)
    labels = [b.label for b in config.buckets]
    assert labels[:3] == ["A", "B", "C"]
    assert labels[26] == "AA"


@pytest.mark.parametrize(
    "kwargs",
    [
        {"bucket_bounds": ((2, 5), (6, None))},  # gap
        {"bucket_bounds": ((2, 5), (5, 10))},  # bounded last bucket
        {"bucket_bounds": ((3, None),)},  # does not start at min_citations
        {"edge_threshold": 1.5},
        {"top_k": 0},
        {"window_years": 0},
        {"year_range": (2015, 2010)},
    ],
)
def test_config_invariants_rejected(kwargs):
    with pytest.raises(ConfigError):
        AnalysisConfig(**kwargs)


def test_config_dict_round_trip():
    config = AnalysisConfig(top_k=5, edge_threshold=0.25)
    assert AnalysisConfig.from_dict(config.to_dict()) == config
