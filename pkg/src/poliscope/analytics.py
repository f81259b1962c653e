"""Denormalized mention-fact table and the report suite built on it.

Every report reduces the same fact table: one row per retained person
mention, joined with its document (outlet, date), knowledge-base attributes
(gender, birth date, country, orientation), scalar sentiment score, and the
topic subsets of its document. Reports that characterize political coverage
restrict to facts whose person is a politician; corpus_stats counts every
level of the funnel.

All means use exactly-rounded summation (math.fsum), so values are
independent of accumulation order and identical across platforms and
thread counts.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import date

from .annotations import MentionAnnotation
from .ingest import CorpusManifest
from .kb import GENDERS, KnowledgeBase, Orientation, age_at
from .reports import EMPTY_PROVENANCE, Provenance, ReportTable
from .sentiment import mean_score, score_mention

log = logging.getLogger(__name__)

CORPUS_GROUP = "__corpus__"

DEFAULT_SUPPORT_SIZE = 1000
DEFAULT_SENTIMENT_FLOOR = 10


@dataclass(frozen=True)
class MentionFact:
    doc_id: str
    outlet: str
    domain: str
    published_at: date
    year: int
    kb_id: str
    name: str
    gender: str
    birth_date: date | None
    country: str
    is_politician: bool
    orientation: Orientation | None
    sentiment_score: float
    topic_ids: frozenset[str]


def build_facts(
    manifest: CorpusManifest,
    mentions: list[MentionAnnotation],
    kb: KnowledgeBase,
    topic_subsets: dict[str, set[str]] | None = None,
    mode: str = "argmax",
) -> list[MentionFact]:
    """Join link-filtered mentions with documents, KB records, and topics.

    Non-person mentions and unlinked mentions produce no fact. A mention
    whose document or KB record is missing is a referential failure: it is
    logged per mention and skipped, never fatal.
    """
    docs = {d.doc_id: d for d in manifest.documents}
    topic_subsets = topic_subsets or {}
    facts: list[MentionFact] = []
    for m in mentions:
        if m.entity_type != "person" or m.link is None:
            continue
        doc = docs.get(m.doc_id)
        if doc is None:
            log.warning("mention at %s[%d] references unknown document", m.doc_id, m.sentence_index)
            continue
        person = kb.persons.get(m.link.kb_id)
        if person is None:
            log.warning("mention of %r has no knowledge-base record", m.link.kb_id)
            continue
        orientation = kb.resolve_orientation(person, doc.published_at) if person.is_politician else None
        topics = frozenset(t for t, ids in topic_subsets.items() if doc.doc_id in ids)
        facts.append(
            MentionFact(
                doc_id=doc.doc_id,
                outlet=doc.outlet,
                domain=doc.domain,
                published_at=doc.published_at,
                year=doc.published_at.year,
                kb_id=person.kb_id,
                name=person.name,
                gender=person.gender,
                birth_date=person.birth_date,
                country=person.country,
                is_politician=person.is_politician,
                orientation=orientation,
                sentiment_score=score_mention(m.sentiment, mode),
                topic_ids=topics,
            )
        )
    return facts


def _politicians(facts: list[MentionFact]) -> list[MentionFact]:
    return [f for f in facts if f.is_politician]


def _grouped(facts: list[MentionFact], by: str) -> dict[str, list[MentionFact]]:
    """Group facts by outlet or by topic; topic groups overlap."""
    groups: dict[str, list[MentionFact]] = defaultdict(list)
    if by == "outlet":
        for f in facts:
            groups[f.outlet].append(f)
    elif by == "topic":
        for f in facts:
            for t in sorted(f.topic_ids):
                groups[t].append(f)
    else:
        raise ValueError(f"unknown grouping {by!r}")
    return groups


def _by_size(groups: dict[str, list[MentionFact]]) -> list[str]:
    return sorted(groups, key=lambda g: (-len(groups[g]), g))


def outlet_sentiment(
    facts: list[MentionFact],
    min_mentions_per_outlet: int = 1,
    provenance: Provenance = EMPTY_PROVENANCE,
) -> ReportTable:
    """Mean politician sentiment per outlet plus the corpus-wide mean."""
    pol = _politicians(facts)
    groups = _grouped(pol, "outlet")
    rows = []
    for outlet in _by_size(groups):
        group = groups[outlet]
        if len(group) < min_mentions_per_outlet:
            continue
        rows.append((outlet, len(group), mean_score([f.sentiment_score for f in group])))
    rows.append(
        (CORPUS_GROUP, len(pol), mean_score([f.sentiment_score for f in pol]) if pol else None)
    )
    return ReportTable(
        report_id="outlet_sentiment",
        columns=("outlet", "mentions", "mean_sentiment"),
        rows=rows,
        sort_key="mentions descending, outlet; corpus row last",
        provenance=provenance,
    )


def orientation_mention_distribution(
    facts: list[MentionFact], by: str = "outlet", provenance: Provenance = EMPTY_PROVENANCE
) -> ReportTable:
    """Share of oriented politician mentions per orientation within each group."""
    oriented = [f for f in _politicians(facts) if f.orientation is not None]
    groups = _grouped(oriented, by)
    rows = []
    for name in _by_size(groups):
        group = groups[name]
        counts = Counter(f.orientation for f in group)
        for bucket in Orientation:
            n = counts.get(bucket, 0)
            rows.append((name, bucket, n, n / len(group)))
    return ReportTable(
        report_id=f"orientation_mentions_by_{by}",
        columns=(by, "orientation", "mentions", "share"),
        rows=rows,
        sort_key=f"{by} mentions descending, orientation left to right",
        provenance=provenance,
    )


def orientation_sentiment_deviation(
    facts: list[MentionFact], by: str = "outlet", provenance: Provenance = EMPTY_PROVENANCE
) -> ReportTable:
    """Per-orientation mean sentiment minus the group's overall mean.

    The group mean is taken over the group's oriented mentions, so the
    share-weighted deviations cancel within each group. Orientations with no
    mentions in a group emit explicit nulls.
    """
    oriented = [f for f in _politicians(facts) if f.orientation is not None]
    groups = _grouped(oriented, by)
    rows = []
    for name in _by_size(groups):
        group = groups[name]
        group_mean = mean_score([f.sentiment_score for f in group])
        per_bucket: dict[Orientation, list[float]] = defaultdict(list)
        for f in group:
            per_bucket[f.orientation].append(f.sentiment_score)
        for bucket in Orientation:
            scores = per_bucket.get(bucket)
            if scores:
                bucket_mean = mean_score(scores)
                rows.append((name, group_mean, bucket, bucket_mean, bucket_mean - group_mean))
            else:
                rows.append((name, group_mean, bucket, None, None))
    return ReportTable(
        report_id=f"orientation_sentiment_by_{by}",
        columns=(by, "group_mean_sentiment", "orientation", "orientation_mean_sentiment", "deviation"),
        rows=rows,
        sort_key=f"{by} mentions descending, orientation left to right",
        provenance=provenance,
    )


def _politician_profiles(pol: list[MentionFact]) -> dict[str, list[MentionFact]]:
    per: dict[str, list[MentionFact]] = defaultdict(list)
    for f in pol:
        per[f.kb_id].append(f)
    return per


def _most_mentioned(per: dict[str, list[MentionFact]]) -> list[str]:
    return sorted(per, key=lambda k: (-len(per[k]), k))


def top_politicians(
    facts: list[MentionFact], k: int = 10, provenance: Provenance = EMPTY_PROVENANCE
) -> ReportTable:
    """The k most-mentioned politicians with mean sentiment and its yearly spread.

    The spread is the population standard deviation of per-year mean
    sentiments over years with at least one mention; a single active year
    gives 0.
    """
    per = _politician_profiles(_politicians(facts))
    rows = []
    for rank, kb_id in enumerate(_most_mentioned(per)[:k], start=1):
        group = per[kb_id]
        yearly: dict[int, list[float]] = defaultdict(list)
        for f in group:
            yearly[f.year].append(f.sentiment_score)
        year_means = [mean_score(v) for _, v in sorted(yearly.items())]
        mu = math.fsum(year_means) / len(year_means)
        std = math.sqrt(math.fsum((m - mu) ** 2 for m in year_means) / len(year_means))
        rows.append(
            (rank, kb_id, group[0].name, len(group),
             mean_score([f.sentiment_score for f in group]), std)
        )
    return ReportTable(
        report_id="top_politicians",
        columns=("rank", "kb_id", "name", "mentions", "mean_sentiment", "yearly_sentiment_std"),
        rows=rows,
        sort_key="mentions descending, kb_id",
        provenance=provenance,
    )


def extreme_politicians(
    facts: list[MentionFact],
    pool: int = 100,
    k: int = 10,
    provenance: Provenance = EMPTY_PROVENANCE,
) -> ReportTable:
    """Highest and lowest mean sentiments within the most-mentioned pool.

    Ties break by mention count (more first), then kb_id.
    """
    per = _politician_profiles(_politicians(facts))
    pool_ids = _most_mentioned(per)[:pool]
    means = {kb_id: mean_score([f.sentiment_score for f in per[kb_id]]) for kb_id in pool_ids}
    rows = []
    highest = sorted(pool_ids, key=lambda i: (-means[i], -len(per[i]), i))[:k]
    lowest = sorted(pool_ids, key=lambda i: (means[i], -len(per[i]), i))[:k]
    for label, ranked in (("highest", highest), ("lowest", lowest)):
        for rank, kb_id in enumerate(ranked, start=1):
            rows.append((label, rank, kb_id, per[kb_id][0].name, len(per[kb_id]), means[kb_id]))
    return ReportTable(
        report_id="extreme_politicians",
        columns=("list", "rank", "kb_id", "name", "mentions", "mean_sentiment"),
        rows=rows,
        sort_key="list (highest, lowest), score rank",
        provenance=provenance,
    )


def gender_reports(
    facts: list[MentionFact],
    by_outlet: bool = True,
    by_year: bool = True,
    top_outlets: int | None = None,
    provenance: Provenance = EMPTY_PROVENANCE,
) -> ReportTable:
    """Gender mention shares and per-gender mean sentiment per group.

    Groups are outlets (optionally the top few by mention count), years, and
    the corpus as a whole. Genders with zero mentions in a group are omitted.
    """
    pol = _politicians(facts)
    groups: list[tuple[str, str, list[MentionFact]]] = []
    if by_outlet:
        by_o = _grouped(pol, "outlet")
        outlets = _by_size(by_o)
        if top_outlets is not None:
            outlets = outlets[:top_outlets]
        groups.extend(("outlet", o, by_o[o]) for o in outlets)
    if by_year:
        by_y: dict[int, list[MentionFact]] = defaultdict(list)
        for f in pol:
            by_y[f.year].append(f)
        groups.extend(("year", str(y), by_y[y]) for y in sorted(by_y))
    groups.append(("corpus", CORPUS_GROUP, pol))
    rows = []
    for group_type, name, group in groups:
        if not group:
            continue
        per_gender: dict[str, list[float]] = defaultdict(list)
        for f in group:
            per_gender[f.gender].append(f.sentiment_score)
        for gender in GENDERS:
            scores = per_gender.get(gender)
            if not scores:
                continue
            rows.append(
                (group_type, name, gender, len(scores), len(scores) / len(group), mean_score(scores))
            )
    return ReportTable(
        report_id="gender_representation",
        columns=("group_type", "group", "gender", "mentions", "share", "mean_sentiment"),
        rows=rows,
        sort_key="outlets by mentions descending, then years ascending, corpus last",
        provenance=provenance,
    )


def age_report(
    facts: list[MentionFact],
    by_outlet: bool = True,
    top_outlets: int | None = None,
    provenance: Provenance = EMPTY_PROVENANCE,
) -> ReportTable:
    """Mean politician age at publication per outlet and corpus-wide.

    Facts without a birth date are excluded from the mean; a group with no
    dated facts reports an explicit null, never 0.
    """
    pol = _politicians(facts)

    def row(name: str, group: list[MentionFact]) -> tuple:
        ages = [age_at(f.birth_date, f.published_at) for f in group if f.birth_date is not None]
        return (name, len(ages), mean_score(ages) if ages else None)

    rows = []
    if by_outlet:
        by_o = _grouped(pol, "outlet")
        outlets = _by_size(by_o)
        if top_outlets is not None:
            outlets = outlets[:top_outlets]
        rows.extend(row(o, by_o[o]) for o in outlets)
    rows.append(row(CORPUS_GROUP, pol))
    return ReportTable(
        report_id="age_by_outlet",
        columns=("outlet", "mentions_with_birth_date", "mean_age"),
        rows=rows,
        sort_key="outlet mentions descending, corpus row last",
        provenance=provenance,
    )


def _cosine(a: list[float], b: list[float]) -> float | None:
    norm_a = math.sqrt(math.fsum(x * x for x in a))
    norm_b = math.sqrt(math.fsum(x * x for x in b))
    if norm_a == 0.0 or norm_b == 0.0:
        return None
    return math.fsum(x * y for x, y in zip(a, b)) / (norm_a * norm_b)


def _source_vectors(
    group: list[MentionFact], support: list[str], floor: int
) -> tuple[list[float], dict[str, float]]:
    counts = Counter(f.kb_id for f in group)
    scores: dict[str, list[float]] = defaultdict(list)
    for f in group:
        scores[f.kb_id].append(f.sentiment_score)
    mentions_vector = [float(counts.get(e, 0)) for e in support]
    sentiment_vector = {
        e: mean_score(scores[e]) for e in support if counts.get(e, 0) >= max(1, floor)
    }
    return mentions_vector, sentiment_vector


def source_similarity_ranks(
    facts: list[MentionFact],
    support_size: int = DEFAULT_SUPPORT_SIZE,
    min_sentiment_mentions: int = DEFAULT_SENTIMENT_FLOOR,
    provenance: Provenance = EMPTY_PROVENANCE,
) -> ReportTable:
    """Cosine similarity of each outlet to the corpus profile, with ranks.

    Vectors cover the most-mentioned politicians (the support set). The
    mention vector counts support mentions; the sentiment vector holds mean
    scores only for support politicians at or above the mention floor in
    that source, and each outlet-corpus cosine uses the intersection of
    defined entries. Undefined cosines (empty intersection or zero norm)
    rank after every defined one; ranks stay a permutation of 1..#outlets.
    """
    pol = _politicians(facts)
    per = _politician_profiles(pol)
    support = _most_mentioned(per)[:support_size]
    corpus_mentions, corpus_sentiment = _source_vectors(pol, support, min_sentiment_mentions)

    outlets = _grouped(pol, "outlet")
    cosines: dict[str, tuple[float | None, float | None]] = {}
    for outlet, group in outlets.items():
        o_mentions, o_sentiment = _source_vectors(group, support, min_sentiment_mentions)
        mention_cos = _cosine(o_mentions, corpus_mentions)
        shared = [e for e in support if e in o_sentiment and e in corpus_sentiment]
        sentiment_cos = (
            _cosine([o_sentiment[e] for e in shared], [corpus_sentiment[e] for e in shared])
            if shared
            else None
        )
        cosines[outlet] = (mention_cos, sentiment_cos)

    def ranks(which: int) -> dict[str, int]:
        defined = sorted(
            (o for o in cosines if cosines[o][which] is not None),
            key=lambda o: (-cosines[o][which], o),
        )
        undefined = sorted(o for o in cosines if cosines[o][which] is None)
        return {o: r for r, o in enumerate(defined + undefined, start=1)}

    mention_ranks = ranks(0)
    sentiment_ranks = ranks(1)
    rows = [
        (o, cosines[o][0], mention_ranks[o], cosines[o][1], sentiment_ranks[o])
        for o in sorted(cosines)
    ]
    return ReportTable(
        report_id="source_similarity",
        columns=("outlet", "mentions_cosine", "mentions_rank", "sentiment_cosine", "sentiment_rank"),
        rows=rows,
        sort_key="outlet ascending",
        provenance=provenance,
    )


def temporal_series(
    facts: list[MentionFact],
    dimension: str,
    measure: str,
    window: tuple[date, date] | None = None,
    top_k: int = 10,
    provenance: Provenance = EMPTY_PROVENANCE,
) -> ReportTable:
    """Yearly series of mention counts or mean sentiment per dimension value.

    Dimension values: the five orientations, the top_k most-mentioned
    politicians, or the genders present in the corpus. Years come from the
    corpus window when given, else from the facts. (year, value) cells with
    zero support are explicit nulls.
    """
    if measure not in ("mentions", "mean_sentiment"):
        raise ValueError(f"unknown measure {measure!r}")
    pol = _politicians(facts)
    if window is not None:
        years = list(range(window[0].year, window[1].year + 1))
    elif pol:
        years = list(range(min(f.year for f in pol), max(f.year for f in pol) + 1))
    else:
        years = []

    if dimension == "orientation":
        scoped = [f for f in pol if f.orientation is not None]
        dim_values: list = list(Orientation)
        key = lambda f: f.orientation
        columns = ("year", "orientation", "value")
        label = {b: (b,) for b in Orientation}
    elif dimension == "politician":
        scoped = pol
        per = _politician_profiles(pol)
        dim_values = _most_mentioned(per)[:top_k]
        key = lambda f: f.kb_id
        columns = ("year", "kb_id", "name", "value")
        label = {k: (k, per[k][0].name) for k in dim_values}
        scoped = [f for f in pol if f.kb_id in set(dim_values)]
    elif dimension == "gender":
        scoped = pol
        present = {f.gender for f in pol}
        dim_values = [g for g in GENDERS if g in present]
        key = lambda f: f.gender
        columns = ("year", "gender", "value")
        label = {g: (g,) for g in dim_values}
    else:
        raise ValueError(f"unknown dimension {dimension!r}")

    cells: dict[tuple[int, object], list[float]] = defaultdict(list)
    for f in scoped:
        cells[(f.year, key(f))].append(f.sentiment_score)
    rows = []
    for year in years:
        for value in dim_values:
            scores = cells.get((year, value))
            if not scores:
                cell = None
            elif measure == "mentions":
                cell = len(scores)
            else:
                cell = mean_score(scores)
            rows.append((year, *label[value], cell))
    return ReportTable(
        report_id=f"temporal_{dimension}_{measure}",
        columns=columns,
        rows=rows,
        sort_key="year ascending, dimension order",
        provenance=provenance,
    )


def corpus_stats(
    manifest: CorpusManifest,
    mentions: list[MentionAnnotation],
    facts: list[MentionFact],
    provenance: Provenance = EMPTY_PROVENANCE,
) -> ReportTable:
    """Funnel and composition counts: documents, mention levels, breakdowns.

    ``mentions`` is the unfiltered annotation list; ``facts`` the retained
    joined mentions, so the three mention levels are hierarchical:
    politicians <= linked persons <= all person mentions.
    """
    pol = _politicians(facts)
    rows: list[tuple] = [
        ("corpus", "documents", len(manifest.documents)),
        ("mentions", "all_persons", sum(1 for m in mentions if m.entity_type == "person")),
        ("mentions", "linked_persons", len(facts)),
        ("mentions", "politicians", len(pol)),
    ]
    by_country = Counter(f.country for f in pol)
    rows.extend(("country", c, n) for c, n in sorted(by_country.items(), key=lambda kv: (-kv[1], kv[0])))
    by_orientation = Counter(f.orientation for f in pol if f.orientation is not None)
    rows.extend(("orientation", b.label, by_orientation.get(b, 0)) for b in Orientation)
    by_gender = Counter(f.gender for f in pol)
    rows.extend(("gender", g, by_gender[g]) for g in GENDERS if by_gender.get(g))
    by_topic: Counter = Counter()
    for f in pol:
        by_topic.update(f.topic_ids)
    rows.extend(("topic", t, by_topic[t]) for t in sorted(by_topic))
    by_outlet = Counter(d.outlet for d in manifest.documents)
    rows.extend(
        ("articles_by_outlet", o, n) for o, n in sorted(by_outlet.items(), key=lambda kv: (-kv[1], kv[0]))
    )
    by_year = Counter(d.published_at.year for d in manifest.documents)
    rows.extend(("articles_by_year", str(y), by_year[y]) for y in sorted(by_year))
    return ReportTable(
        report_id="corpus_stats",
        columns=("section", "key", "count"),
        rows=rows,
        sort_key="fixed section order",
        provenance=provenance,
    )
