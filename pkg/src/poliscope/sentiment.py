"""Scalar sentiment scores, confidence filtering, and the stability check.

A mention's class distribution maps to a score in {-1, 0, +1} via argmax
(ties resolve to neutral); probability-weighted scoring (p_positive minus
p_negative) is available behind the ``mode`` switch. The stability check
mirrors a confidence-thresholding experiment: compare per-entity mention
counts and mean scores before and after keeping only the most confident
fraction of each argmax class.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass

from .annotations import MentionAnnotation, SentimentDistribution

SCORING_MODES = ("argmax", "expected")

_CLASS_SCORES = {"negative": -1, "neutral": 0, "positive": 1}


def argmax_class(d: SentimentDistribution) -> str:
    """Highest-probability class; any tie on the maximum resolves to neutral."""
    top = max(d.p_negative, d.p_neutral, d.p_positive)
    winners = [
        name
        for name, p in (("negative", d.p_negative), ("neutral", d.p_neutral), ("positive", d.p_positive))
        if p == top
    ]
    return winners[0] if len(winners) == 1 else "neutral"


def score_mention(d: SentimentDistribution, mode: str = "argmax") -> float:
    if mode == "argmax":
        return float(_CLASS_SCORES[argmax_class(d)])
    if mode == "expected":
        return d.p_positive - d.p_negative
    raise ValueError(f"unknown scoring mode {mode!r}")


def confidence(d: SentimentDistribution) -> float:
    return max(d.p_negative, d.p_neutral, d.p_positive)


def mean_score(values: list[float]) -> float:
    if not values:
        raise ValueError("mean of empty sequence")
    return math.fsum(values) / len(values)


def pearson(x: list[float], y: list[float]) -> float:
    """Product-moment correlation; raises on short or constant input."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 points")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("zero variance: correlation undefined")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    # split square roots: sxx * syy may over- or underflow even when both
    # factors are representable
    return sxy / (math.sqrt(sxx) * math.sqrt(syy))


def filter_most_confident(
    mentions: list[MentionAnnotation], keep_fraction: float
) -> list[MentionAnnotation]:
    """Per argmax class, keep the ceil(keep_fraction * count) most confident.

    Confidence ties break by (doc_id, span start, span end). The kept
    mentions come back in their original input order, so a fraction of 1.0
    is the identity.
    """
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError(f"keep fraction must be in (0, 1], got {keep_fraction}")
    by_class: dict[str, list[int]] = defaultdict(list)
    for idx, m in enumerate(mentions):
        by_class[argmax_class(m.sentiment)].append(idx)
    kept: set[int] = set()
    for indices in by_class.values():
        quota = math.ceil(keep_fraction * len(indices))
        ranked = sorted(
            indices,
            key=lambda i: (
                -confidence(mentions[i].sentiment),
                mentions[i].doc_id,
                mentions[i].char_span[0],
                mentions[i].char_span[1],
            ),
        )
        kept.update(ranked[:quota])
    return [m for i, m in enumerate(mentions) if i in kept]


@dataclass(frozen=True)
class StabilityResult:
    pearson_mentions: float
    pearson_sentiment: float
    support_size: int


def _entity_aggregates(
    mentions: list[MentionAnnotation], mode: str
) -> tuple[Counter, dict[str, float]]:
    counts: Counter = Counter()
    scores: dict[str, list[float]] = defaultdict(list)
    for m in mentions:
        assert m.link is not None
        counts[m.link.kb_id] += 1
        scores[m.link.kb_id].append(score_mention(m.sentiment, mode))
    means = {kb_id: mean_score(vals) for kb_id, vals in scores.items()}
    return counts, means


def stability_check(
    mentions: list[MentionAnnotation],
    top_k: int = 1000,
    keep_fraction: float = 0.5,
    mode: str = "argmax",
) -> StabilityResult:
    """Correlate per-entity aggregates before and after confidence filtering.

    Over the ``top_k`` most-mentioned entities, Pearson-correlates (a) mention
    counts and (b) mean sentiment between the full mention set and the
    per-class most-confident subset. All mentions must be linked. Sentiment
    vectors cover the support entities present in both samples; fewer than 2
    such entities, or a constant vector, is an error.
    """
    if any(m.link is None for m in mentions):
        raise ValueError("stability check requires linked mentions only")
    counts_all, means_all = _entity_aggregates(mentions, mode)
    support = [kb_id for kb_id, _ in sorted(counts_all.items(), key=lambda kv: (-kv[1], kv[0]))]
    support = support[:top_k]

    sample = filter_most_confident(mentions, keep_fraction)
    counts_kept, means_kept = _entity_aggregates(sample, mode)

    x_mentions = [float(counts_all[e]) for e in support]
    y_mentions = [float(counts_kept.get(e, 0)) for e in support]

    both = [e for e in support if e in means_all and e in means_kept]
    if len(both) < 2:
        raise ValueError("fewer than 2 support entities survive both samples")
    x_sent = [means_all[e] for e in both]
    y_sent = [means_kept[e] for e in both]

    return StabilityResult(
        pearson_mentions=pearson(x_mentions, y_mentions),
        pearson_sentiment=pearson(x_sent, y_sent),
        support_size=len(support),
    )
