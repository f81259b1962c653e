"""BM25 inverted index over title+body and threshold-based topic subsets.

Scores follow the standard Okapi form with k1=1.2, b=0.75 and
IDF(t) = ln(1 + (N - df + 0.5) / (df + 0.5)).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .ingest import CorpusManifest
from .text import tokenize

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


@dataclass
class InvertedIndex:
    postings: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    doc_lengths: dict[str, int] = field(default_factory=dict)
    avg_doc_length: float = 0.0
    doc_count: int = 0


@dataclass(frozen=True)
class TopicQuery:
    topic_id: str
    query_text: str
    pertinence_threshold: float

    def __post_init__(self) -> None:
        if self.pertinence_threshold < 0.0:
            raise ValueError(f"pertinence threshold must be >= 0, got {self.pertinence_threshold}")


def document_terms(title: str, body: str) -> list[str]:
    return tokenize(title) + tokenize(body)


def build_index(manifest: CorpusManifest) -> InvertedIndex:
    """Index the concatenation of each document's title and body."""
    index = InvertedIndex()
    for doc in manifest.documents:
        terms = document_terms(doc.title, doc.body)
        index.doc_lengths[doc.doc_id] = len(terms)
        for term, tf in sorted(Counter(terms).items()):
            index.postings.setdefault(term, []).append((doc.doc_id, tf))
    index.doc_count = len(index.doc_lengths)
    if index.doc_count:
        index.avg_doc_length = sum(index.doc_lengths.values()) / index.doc_count
    return index


def idf(index: InvertedIndex, term: str) -> float:
    df = len(index.postings.get(term, ()))
    return math.log(1.0 + (index.doc_count - df + 0.5) / (df + 0.5))


def bm25_score(
    index: InvertedIndex,
    query_terms: list[str],
    doc_id: str,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> float:
    """Okapi BM25 score of one document against a bag of query terms."""
    if doc_id not in index.doc_lengths:
        raise KeyError(f"document {doc_id!r} is not in the index")
    length_ratio = index.doc_lengths[doc_id] / index.avg_doc_length if index.avg_doc_length else 0.0
    score = 0.0
    for term in query_terms:
        posting = index.postings.get(term)
        if not posting:
            continue
        tf = next((f for d, f in posting if d == doc_id), 0)
        if tf == 0:
            continue
        score += idf(index, term) * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * length_ratio))
    return score


def select_topic_subset(
    index: InvertedIndex, topic: TopicQuery, k1: float = DEFAULT_K1, b: float = DEFAULT_B
) -> set[str]:
    """Documents scoring at or above the topic's pertinence threshold.

    Candidates are the documents containing at least one query term, so a
    zero threshold selects exactly the term-matching documents rather than
    the whole corpus.
    """
    terms = tokenize(topic.query_text)
    candidates: set[str] = set()
    for term in set(terms):
        candidates.update(d for d, _ in index.postings.get(term, ()))
    return {
        doc_id
        for doc_id in candidates
        if bm25_score(index, terms, doc_id, k1=k1, b=b) >= topic.pertinence_threshold
    }


def load_topics(path: str | Path) -> dict[str, TopicQuery]:
    """Topic config: JSON array of {topic_id, query_text, threshold}."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise ConfigError("topic config must be a JSON array")
    topics: dict[str, TopicQuery] = {}
    for entry in raw:
        if not isinstance(entry, dict) or set(entry) != {"topic_id", "query_text", "threshold"}:
            raise ConfigError(
                "each topic entry must have exactly topic_id, query_text, threshold"
            )
        topic_id = entry["topic_id"]
        if topic_id in topics:
            raise ConfigError(f"duplicate topic_id {topic_id!r}")
        try:
            topics[topic_id] = TopicQuery(
                topic_id=topic_id,
                query_text=entry["query_text"],
                pertinence_threshold=float(entry["threshold"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"topic {topic_id!r}: {exc}")
    return topics


def index_to_dict(index: InvertedIndex) -> dict:
    return {
        "postings": {t: [[d, f] for d, f in p] for t, p in sorted(index.postings.items())},
        "doc_lengths": dict(sorted(index.doc_lengths.items())),
        "avg_doc_length": index.avg_doc_length,
        "doc_count": index.doc_count,
    }


def index_from_dict(raw: dict) -> InvertedIndex:
    return InvertedIndex(
        postings={t: [(d, int(f)) for d, f in p] for t, p in raw["postings"].items()},
        doc_lengths={d: int(n) for d, n in raw["doc_lengths"].items()},
        avg_doc_length=float(raw["avg_doc_length"]),
        doc_count=int(raw["doc_count"]),
    )
