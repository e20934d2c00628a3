import pytest

from teamdiv.corpus import parse_corpus


def record(pid, year, authors, topics, citations=None):
    data = {"id": pid, "year": year, "authors": list(authors), "topics": list(topics)}
    if citations is not None:
        data["citations_5y"] = citations
    return data


@pytest.fixture
def small_corpus():
    """Three analysis candidates on top of per-author backfill papers."""
    records = [
        # backfill: every analysis author has window coverage
        record("w1", 2011, ["alice"], ["ml"]),
        record("w2", 2012, ["bob"], ["ml", "nlp"]),
        record("w3", 2010, ["carol"], ["hci"]),
        record("w4", 2012, ["dave"], ["db"]),
        # analysis candidates
        record("p1", 2013, ["alice", "bob"], ["ml"], citations=3),
        record("p2", 2014, ["alice", "carol"], ["ml", "hci"], citations=12),
        record("p3", 2015, ["bob", "dave"], ["nlp", "db"], citations=160),
        # excluded: single author
        record("p4", 2013, ["alice"], ["ml"], citations=50),
        # excluded: no citation count
        record("p5", 2013, ["alice", "bob"], ["ml"]),
    ]
    return parse_corpus(records)
