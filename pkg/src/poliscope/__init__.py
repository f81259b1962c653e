"""Political-news analytics engine.

Pipeline: ingest a JSONL news corpus, near-deduplicate it per domain with
MinHash/LSH, take person-mention annotations (from the bundled deterministic
mock annotator or an external model adapter), enrich linked mentions with
knowledge-base attributes and political orientation, select topic subsets
with BM25, and reduce everything into reproducible CSV/JSON report tables.
"""

from .analytics import MentionFact, build_facts
from .annotations import (
    EntityLink,
    MentionAnnotation,
    SentimentDistribution,
    filter_linked,
    mock_annotate,
    read_annotations,
    write_annotations,
)
from .dedup import MinHashSignature, dedup_per_domain, estimate_jaccard, shingle
from .errors import (
    ConfigError,
    DegenerateDocumentError,
    PoliscopeError,
    ReferentialIntegrityError,
    SchemaError,
)
from .ingest import CorpusManifest, RawDocument, filter_min_length, load_corpus, write_corpus
from .kb import KnowledgeBase, Orientation, PartyRecord, PersonRecord, age_at, load_kb, orientation_of
from .reports import Provenance, ReportTable
from .sentiment import confidence, pearson, score_mention, stability_check
from .topics import InvertedIndex, TopicQuery, bm25_score, build_index, load_topics, select_topic_subset

__version__ = "1.0.0"

__all__ = [
    "ConfigError",
    "CorpusManifest",
    "DegenerateDocumentError",
    "EntityLink",
    "InvertedIndex",
    "KnowledgeBase",
    "MentionAnnotation",
    "MentionFact",
    "MinHashSignature",
    "Orientation",
    "PartyRecord",
    "PersonRecord",
    "PoliscopeError",
    "Provenance",
    "RawDocument",
    "ReferentialIntegrityError",
    "ReportTable",
    "SchemaError",
    "SentimentDistribution",
    "TopicQuery",
    "age_at",
    "bm25_score",
    "build_facts",
    "build_index",
    "confidence",
    "dedup_per_domain",
    "estimate_jaccard",
    "filter_linked",
    "filter_min_length",
    "load_corpus",
    "load_kb",
    "load_topics",
    "mock_annotate",
    "orientation_of",
    "pearson",
    "read_annotations",
    "score_mention",
    "select_topic_subset",
    "shingle",
    "stability_check",
    "write_annotations",
    "write_corpus",
    "__version__",
]
