"""Corpus loading, validation, and length filtering.

Wire format: UTF-8 JSONL, one document per line with fields exactly
``doc_id, url, domain, outlet, published_at (ISO-8601 date), title, body``.
Outlet metadata is a separate JSON file mapping outlet -> {"leaning": str | null}.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

CORPUS_FIELDS = ("doc_id", "url", "domain", "outlet", "published_at", "title", "body")

# Window assigned to a corpus with no documents and no configured window.
EMPTY_WINDOW = (date(1970, 1, 1), date(1970, 1, 1))


@dataclass(frozen=True)
class RawDocument:
    """One news article, as extracted upstream of this engine."""

    doc_id: str
    url: str
    domain: str
    outlet: str
    published_at: date
    title: str
    body: str


@dataclass(frozen=True)
class RecordError:
    """One malformed input line, kept instead of silently dropping the line."""

    line: int
    field: str | None
    message: str


@dataclass
class CorpusManifest:
    documents: list[RawDocument]
    window: tuple[date, date]
    outlet_metadata: dict[str, str | None]
    errors: list[RecordError] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.window[0] > self.window[1]:
            raise ValueError(f"window start {self.window[0]} after end {self.window[1]}")


def _parse_record(raw: dict, line_no: int) -> RawDocument:
    for name in CORPUS_FIELDS:
        if name not in raw:
            raise _FieldError(name, "missing")
    extra = set(raw) - set(CORPUS_FIELDS)
    if extra:
        raise _FieldError(sorted(extra)[0], "unexpected field")
    for name in ("doc_id", "url", "domain", "outlet", "published_at", "title", "body"):
        if not isinstance(raw[name], str):
            raise _FieldError(name, f"expected string, got {type(raw[name]).__name__}")
    try:
        published = date.fromisoformat(raw["published_at"])
    except ValueError:
        raise _FieldError("published_at", f"not an ISO-8601 date: {raw['published_at']!r}")
    domain = raw["domain"].lower()
    if not domain:
        raise _FieldError("domain", "empty")
    if not raw["doc_id"]:
        raise _FieldError("doc_id", "empty")
    return RawDocument(
        doc_id=raw["doc_id"],
        url=raw["url"],
        domain=domain,
        outlet=raw["outlet"],
        published_at=published,
        title=raw["title"],
        body=raw["body"],
    )


class _FieldError(Exception):
    def __init__(self, field_name: str, message: str):
        self.field_name = field_name
        self.message = message


def load_outlet_metadata(path: str | Path) -> dict[str, str | None]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: outlet metadata must be a JSON object")
    out: dict[str, str | None] = {}
    for outlet, meta in raw.items():
        if not isinstance(meta, dict):
            raise ValueError(f"{path}: outlet {outlet!r}: expected object")
        out[outlet] = meta.get("leaning")
    return out


def load_corpus(
    path: str | Path,
    outlets_path: str | Path | None = None,
    window: tuple[date, date] | None = None,
) -> CorpusManifest:
    """Parse a corpus file into a manifest.

    Malformed lines become :class:`RecordError` entries on the manifest
    (``manifest.errors``) rather than being dropped. Duplicate doc_ids and,
    when a window is configured, out-of-window dates are rejected the same
    way. Document order equals input file order.
    """
    documents: list[RawDocument] = []
    errors: list[RecordError] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                errors.append(RecordError(line_no, None, f"invalid JSON: {exc.msg}"))
                continue
            if not isinstance(raw, dict):
                errors.append(RecordError(line_no, None, "record is not a JSON object"))
                continue
            try:
                doc = _parse_record(raw, line_no)
            except _FieldError as exc:
                errors.append(RecordError(line_no, exc.field_name, exc.message))
                continue
            if doc.doc_id in seen_ids:
                errors.append(RecordError(line_no, "doc_id", f"duplicate doc_id {doc.doc_id!r}"))
                continue
            if window is not None and not (window[0] <= doc.published_at <= window[1]):
                errors.append(
                    RecordError(line_no, "published_at", f"{doc.published_at} outside corpus window")
                )
                continue
            seen_ids.add(doc.doc_id)
            documents.append(doc)

    if window is None:
        if documents:
            dates = [d.published_at for d in documents]
            window = (min(dates), max(dates))
        else:
            window = EMPTY_WINDOW

    outlet_metadata = load_outlet_metadata(outlets_path) if outlets_path is not None else {}
    for doc in documents:
        outlet_metadata.setdefault(doc.outlet, None)

    return CorpusManifest(documents=documents, window=window, outlet_metadata=outlet_metadata, errors=errors)


def filter_min_length(manifest: CorpusManifest, min_chars: int = 200) -> CorpusManifest:
    """Keep documents whose body has at least ``min_chars`` Unicode scalar values.

    The title is excluded from the count. Order is preserved; the operation
    is idempotent.
    """
    if min_chars < 0:
        raise ValueError(f"min_chars must be >= 0, got {min_chars}")
    kept = [d for d in manifest.documents if len(d.body) >= min_chars]
    return CorpusManifest(
        documents=kept,
        window=manifest.window,
        outlet_metadata=dict(manifest.outlet_metadata),
        errors=list(manifest.errors),
    )


def document_to_record(doc: RawDocument) -> dict:
    return {
        "doc_id": doc.doc_id,
        "url": doc.url,
        "domain": doc.domain,
        "outlet": doc.outlet,
        "published_at": doc.published_at.isoformat(),
        "title": doc.title,
        "body": doc.body,
    }


def corpus_to_text(manifest: CorpusManifest) -> str:
    """Canonical JSONL serialization: fixed field order, \\n line endings."""
    return "".join(
        json.dumps(document_to_record(doc), ensure_ascii=False) + "\n" for doc in manifest.documents
    )


def write_corpus(manifest: CorpusManifest, path: str | Path) -> None:
    """Serialize documents in canonical field order, one JSON object per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(corpus_to_text(manifest))


def corpus_content_hash(manifest: CorpusManifest) -> str:
    """SHA-256 over the canonical document serialization; used for provenance."""
    h = hashlib.sha256()
    for doc in manifest.documents:
        h.update(json.dumps(document_to_record(doc), ensure_ascii=False).encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()
