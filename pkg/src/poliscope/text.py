"""Deterministic, language-neutral text primitives shared by dedup and topics."""

from __future__ import annotations

import hashlib
import unicodedata


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_edge_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Lowercase, split on Unicode whitespace, strip punctuation from token edges.

    Tokens that are pure punctuation vanish. No stemming, no stop words.
    """
    out = []
    for raw in text.lower().split():
        tok = _strip_edge_punct(raw)
        if tok:
            out.append(tok)
    return out


def hash64(data: str) -> int:
    """Stable 64-bit hash of a string (process- and platform-independent)."""
    return int.from_bytes(hashlib.blake2b(data.encode("utf-8"), digest_size=8).digest(), "big")


def unit_interval_hash(*parts: object) -> float:
    """Deterministic pseudo-uniform in [0, 1) derived from the given parts.

    Used where a seeded quantity must be reproducible per record without
    threading RNG state through the pipeline.
    """
    key = "\x1f".join(str(p) for p in parts)
    return hash64(key) / 2**64
