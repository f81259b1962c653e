"""Mention annotation interchange: schema, link-threshold filtering, mock annotator.

Wire format: UTF-8 JSONL with fields exactly ``doc_id, sentence_index, start,
end, surface, entity_type, kb_id (nullable), link_log_likelihood (nullable),
p_negative, p_neutral, p_positive``. This file is the contract between the
analytics engine and whatever produces annotations (the mock annotator here,
or an external model adapter).
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ReferentialIntegrityError, SchemaError
from .ingest import CorpusManifest, RawDocument
from .text import tokenize, unit_interval_hash

log = logging.getLogger(__name__)

ANNOTATION_FIELDS = (
    "doc_id",
    "sentence_index",
    "start",
    "end",
    "surface",
    "entity_type",
    "kb_id",
    "link_log_likelihood",
    "p_negative",
    "p_neutral",
    "p_positive",
)

ENTITY_TYPES = ("person", "organization", "location")
SENTIMENT_CLASSES = ("negative", "neutral", "positive")

DISTRIBUTION_TOLERANCE = 1e-6
DEFAULT_LINK_THRESHOLD = -0.2

_SENTENCE_BREAK = re.compile(r"(?<=[.!?])\s+")


@dataclass(frozen=True)
class SentimentDistribution:
    p_negative: float
    p_neutral: float
    p_positive: float

    def __post_init__(self) -> None:
        probs = (self.p_negative, self.p_neutral, self.p_positive)
        for p in probs:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"class probability {p} outside [0, 1]")
        total = self.p_negative + self.p_neutral + self.p_positive
        if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
            raise ValueError(f"class probabilities sum to {total}, expected 1")


@dataclass(frozen=True)
class EntityLink:
    kb_id: str
    log_likelihood: float

    def __post_init__(self) -> None:
        if self.log_likelihood > 0.0:
            raise ValueError(f"link log-likelihood must be <= 0, got {self.log_likelihood}")


@dataclass(frozen=True)
class MentionAnnotation:
    doc_id: str
    sentence_index: int
    char_span: tuple[int, int]
    surface: str
    entity_type: str
    link: EntityLink | None
    sentiment: SentimentDistribution

    def __post_init__(self) -> None:
        start, end = self.char_span
        if not 0 <= start < end:
            raise ValueError(f"invalid span {self.char_span}")
        if self.entity_type not in ENTITY_TYPES:
            raise ValueError(f"unknown entity type {self.entity_type!r}")


def _require(raw: dict, line_no: int) -> None:
    for name in ANNOTATION_FIELDS:
        if name not in raw:
            raise SchemaError("missing", line=line_no, field=name)
    extra = set(raw) - set(ANNOTATION_FIELDS)
    if extra:
        raise SchemaError("unexpected field", line=line_no, field=sorted(extra)[0])


def read_annotations(
    path: str | Path, manifest: CorpusManifest | None = None
) -> list[MentionAnnotation]:
    """Load and validate an annotation file.

    Raises :class:`SchemaError` naming the offending line for any malformed
    record, and :class:`ReferentialIntegrityError` for mentions of documents
    absent from ``manifest`` (when given).
    """
    known_docs = {d.doc_id for d in manifest.documents} if manifest is not None else None
    out: list[MentionAnnotation] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc.msg}", line=line_no)
            if not isinstance(raw, dict):
                raise SchemaError("record is not a JSON object", line=line_no)
            _require(raw, line_no)
            kb_id = raw["kb_id"]
            ll = raw["link_log_likelihood"]
            if (kb_id is None) != (ll is None):
                raise SchemaError(
                    "kb_id and link_log_likelihood must be both present or both null",
                    line=line_no,
                    field="kb_id",
                )
            try:
                sentiment = SentimentDistribution(
                    p_negative=float(raw["p_negative"]),
                    p_neutral=float(raw["p_neutral"]),
                    p_positive=float(raw["p_positive"]),
                )
            except (TypeError, ValueError) as exc:
                raise SchemaError(str(exc), line=line_no, field="p_negative")
            try:
                mention = MentionAnnotation(
                    doc_id=raw["doc_id"],
                    sentence_index=int(raw["sentence_index"]),
                    char_span=(int(raw["start"]), int(raw["end"])),
                    surface=raw["surface"],
                    entity_type=raw["entity_type"],
                    link=None if kb_id is None else EntityLink(kb_id, float(ll)),
                    sentiment=sentiment,
                )
            except (TypeError, ValueError) as exc:
                raise SchemaError(str(exc), line=line_no)
            if known_docs is not None and mention.doc_id not in known_docs:
                raise ReferentialIntegrityError(
                    f"line {line_no}: annotation references unknown doc_id {mention.doc_id!r}"
                )
            out.append(mention)
    return out


def annotation_to_record(m: MentionAnnotation) -> dict:
    return {
        "doc_id": m.doc_id,
        "sentence_index": m.sentence_index,
        "start": m.char_span[0],
        "end": m.char_span[1],
        "surface": m.surface,
        "entity_type": m.entity_type,
        "kb_id": m.link.kb_id if m.link else None,
        "link_log_likelihood": m.link.log_likelihood if m.link else None,
        "p_negative": m.sentiment.p_negative,
        "p_neutral": m.sentiment.p_neutral,
        "p_positive": m.sentiment.p_positive,
    }


def annotations_to_text(mentions: list[MentionAnnotation]) -> str:
    """Canonical JSONL serialization: fixed field order, \\n line endings."""
    return "".join(
        json.dumps(annotation_to_record(m), ensure_ascii=False) + "\n" for m in mentions
    )


def write_annotations(mentions: list[MentionAnnotation], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(annotations_to_text(mentions))


def filter_linked(
    mentions: list[MentionAnnotation], min_log_likelihood: float = DEFAULT_LINK_THRESHOLD
) -> list[MentionAnnotation]:
    """Keep mentions whose link log-likelihood is strictly greater than the threshold.

    The inequality is strict: a mention at exactly the threshold is dropped.
    The dropped count is reported via the module logger.
    """
    kept = [m for m in mentions if m.link is not None and m.link.log_likelihood > min_log_likelihood]
    log.info("link filter at %s: kept %d of %d mentions", min_log_likelihood, len(kept), len(mentions))
    return kept


def split_sentences(body: str) -> list[tuple[int, str]]:
    """(offset, text) per sentence; breaks after '.', '!', '?' followed by whitespace."""
    sentences = []
    pos = 0
    for match in _SENTENCE_BREAK.finditer(body):
        sentences.append((pos, body[pos : match.start()]))
        pos = match.end()
    if pos < len(body):
        sentences.append((pos, body[pos:]))
    return sentences


def _find_mentions(sentence: str, surfaces: list[str]) -> list[tuple[int, int, str]]:
    # candidate spans for every gazetteer surface, token-bounded
    candidates = []
    for surface in surfaces:
        at = sentence.find(surface)
        while at != -1:
            end = at + len(surface)
            before_ok = at == 0 or not sentence[at - 1].isalnum()
            after_ok = end == len(sentence) or not sentence[end].isalnum()
            if before_ok and after_ok:
                candidates.append((at, end, surface))
            at = sentence.find(surface, at + 1)
    # greedy leftmost-longest, deterministic
    candidates.sort(key=lambda c: (c[0], -(c[1] - c[0]), c[2]))
    chosen: list[tuple[int, int, str]] = []
    taken_until = -1
    for start, end, surface in candidates:
        if start > taken_until:
            chosen.append((start, end, surface))
            taken_until = end - 1
    return chosen


def _sentence_class(sentence: str, rules: dict[str, str]) -> str:
    for token in tokenize(sentence):
        cls = rules.get(token)
        if cls is not None:
            return cls
    return "neutral"


def _distribution_for(winner: str, confidence: float) -> SentimentDistribution:
    rest = 1.0 - confidence
    losers = [c for c in SENTIMENT_CLASSES if c != winner]
    parts = {winner: confidence, losers[0]: rest * 0.6}
    parts[losers[1]] = 1.0 - parts[winner] - parts[losers[0]]
    return SentimentDistribution(
        p_negative=parts["negative"], p_neutral=parts["neutral"], p_positive=parts["positive"]
    )


def mock_annotate(
    manifest: CorpusManifest,
    gazetteer: dict[str, str],
    rules: dict[str, str],
    seed: int = 0,
) -> list[MentionAnnotation]:
    """Deterministic stand-in for a model-based annotator.

    Splits bodies into sentences, marks exact gazetteer matches as person
    mentions, and assigns the sentiment class of the first cue word found in
    the sentence (neutral otherwise). Confidences and link log-likelihoods
    are hash-derived from (seed, doc, span), so output is byte-stable and
    spread across the link-acceptance threshold.

    Exists so the analytics test suite never needs a model runtime; the
    sentence splitter is intentionally simplistic.
    """
    if not gazetteer:
        raise ValueError("gazetteer must be non-empty")
    for cls in rules.values():
        if cls not in SENTIMENT_CLASSES:
            raise ValueError(f"unknown sentiment class {cls!r} in rule table")
    surfaces = sorted(gazetteer, key=lambda s: (-len(s), s))
    out: list[MentionAnnotation] = []
    for doc in manifest.documents:
        for sent_idx, (_, sentence) in enumerate(split_sentences(doc.body)):
            spans = _find_mentions(sentence, surfaces)
            if not spans:
                continue
            winner = _sentence_class(sentence, rules)
            for start, end, surface in spans:
                conf = 0.6 + 0.35 * unit_interval_hash(seed, doc.doc_id, sent_idx, start, "conf")
                ll = -0.4 * unit_interval_hash(seed, doc.doc_id, sent_idx, start, "link")
                out.append(
                    MentionAnnotation(
                        doc_id=doc.doc_id,
                        sentence_index=sent_idx,
                        char_span=(start, end),
                        surface=surface,
                        entity_type="person",
                        link=EntityLink(kb_id=gazetteer[surface], log_likelihood=ll),
                        sentiment=_distribution_for(winner, conf),
                    )
                )
    return out


def document_sentences(doc: RawDocument) -> list[tuple[int, str]]:
    return split_sentences(doc.body)
