"""Independent reference implementations used to verify the engine.

Nothing here imports the package under test. Every function re-derives its
result from raw artifact files (JSONL/CSV/JSON) with plain loops and
dictionaries. Scalar arithmetic deliberately uses the same exactly-rounded
primitives the contracts pin down (math.fsum for accumulation, the literal
closed forms for BM25/IDF, day-count / 365.2425 for ages), so values are
comparable at full precision while grouping, joining, ordering, and
filtering logic is re-implemented from scratch.
"""

from __future__ import annotations

import csv
import io
import json
import math
import unicodedata
from collections import Counter, defaultdict
from datetime import date
from pathlib import Path

ORIENTATION_LABELS = ["radical_left", "center_left", "center", "center_right", "radical_right"]
GENDER_ORDER = ["male", "female", "other", "unknown"]
CORPUS_GROUP = "__corpus__"


# ---------------------------------------------------------------- parsing

def load_jsonl(path: str | Path) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(json.loads(line))
    return out


def load_crosswalk(path: str | Path) -> dict[str, str]:
    with open(path, encoding="utf-8", newline="") as fh:
        return {
            row["encyclopedia_party_id"]: row["parlgov_party_id"] for row in csv.DictReader(fh)
        }


# ---------------------------------------------------------------- text

def tokens(text: str) -> list[str]:
    out = []
    for piece in text.lower().split():
        start, end = 0, len(piece)
        while start < end and unicodedata.category(piece[start]).startswith("P"):
            start += 1
        while end > start and unicodedata.category(piece[end - 1]).startswith("P"):
            end -= 1
        if end > start:
            out.append(piece[start:end])
    return out


# ---------------------------------------------------------------- BM25

def bm25_all_scores(
    docs: list[dict], query_text: str, k1: float = 1.2, b: float = 0.75
) -> dict[str, float]:
    """Document-at-a-time scoring of every document against the query."""
    doc_tokens = {d["doc_id"]: tokens(d["title"]) + tokens(d["body"]) for d in docs}
    n_docs = len(doc_tokens)
    avg_len = sum(len(t) for t in doc_tokens.values()) / n_docs if n_docs else 0.0
    query = tokens(query_text)
    df = {term: sum(1 for t in doc_tokens.values() if term in t) for term in set(query)}
    scores = {}
    for doc_id, toks in doc_tokens.items():
        counts = Counter(toks)
        score = 0.0
        for term in query:
            tf = counts.get(term, 0)
            if tf == 0:
                continue
            idf = math.log(1.0 + (n_docs - df[term] + 0.5) / (df[term] + 0.5))
            norm = tf + k1 * (1.0 - b + b * len(toks) / avg_len)
            score += idf * tf * (k1 + 1.0) / norm
        scores[doc_id] = score
    return scores


def topic_subsets(docs: list[dict], topics: list[dict]) -> dict[str, set[str]]:
    """Exhaustive-threshold subsets: term-matching docs scoring >= threshold."""
    subsets: dict[str, set[str]] = {}
    for topic in topics:
        query_terms = set(tokens(topic["query_text"]))
        scores = bm25_all_scores(docs, topic["query_text"])
        matching = {
            d["doc_id"]
            for d in docs
            if query_terms & set(tokens(d["title"]) + tokens(d["body"]))
        }
        subsets[topic["topic_id"]] = {
            doc_id for doc_id in matching if scores[doc_id] >= topic["threshold"]
        }
    return subsets


# ---------------------------------------------------------------- dedup

def shingle_tuples(text: str, w: int = 5) -> frozenset:
    toks = tokens(text)
    if not toks:
        return frozenset()
    if len(toks) < w:
        return frozenset({tuple(toks)})
    return frozenset(tuple(toks[i : i + w]) for i in range(len(toks) - w + 1))


def exact_jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def dedup_reference(
    docs: list[dict], threshold: float = 0.5, w: int = 5
) -> tuple[list[str], list[dict]]:
    """All-pairs exact-Jaccard dedup with transitive closure per domain.

    Returns (survivor doc_ids in input order, clusters). A cluster's
    survivor is its earliest published document, ties broken by doc_id.
    """
    by_domain: dict[str, list[dict]] = defaultdict(list)
    for d in docs:
        by_domain[d["domain"]].append(d)
    removed: set[str] = set()
    clusters = []
    for domain in sorted(by_domain):
        members = by_domain[domain]
        sets = {d["doc_id"]: shingle_tuples(d["body"], w) for d in members}
        adjacency: dict[str, set[str]] = {d["doc_id"]: set() for d in members}
        ids = [d["doc_id"] for d in members]
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                if exact_jaccard(sets[ids[i]], sets[ids[j]]) >= threshold:
                    adjacency[ids[i]].add(ids[j])
                    adjacency[ids[j]].add(ids[i])
        seen: set[str] = set()
        date_of = {d["doc_id"]: d["published_at"] for d in members}
        for start in ids:
            if start in seen or not adjacency[start]:
                continue
            component = set()
            frontier = [start]
            while frontier:
                node = frontier.pop()
                if node in component:
                    continue
                component.add(node)
                frontier.extend(adjacency[node] - component)
            seen |= component
            survivor = min(component, key=lambda i: (date_of[i], i))
            removed |= component - {survivor}
            clusters.append(
                {"domain": domain, "members": sorted(component), "survivor": survivor}
            )
    survivors = [d["doc_id"] for d in docs if d["doc_id"] not in removed]
    clusters.sort(key=lambda c: (c["domain"], c["members"]))
    return survivors, clusters


# ---------------------------------------------------------------- sentiment

def argmax_label(p_neg: float, p_neu: float, p_pos: float) -> str:
    best = max(p_neg, p_neu, p_pos)
    hits = [
        label
        for label, p in (("negative", p_neg), ("neutral", p_neu), ("positive", p_pos))
        if p == best
    ]
    return hits[0] if len(hits) == 1 else "neutral"


def mention_value(record: dict, mode: str = "argmax") -> float:
    if mode == "expected":
        return record["p_positive"] - record["p_negative"]
    label = argmax_label(record["p_negative"], record["p_neutral"], record["p_positive"])
    return {"negative": -1.0, "neutral": 0.0, "positive": 1.0}[label]


def mention_confidence(record: dict) -> float:
    return max(record["p_negative"], record["p_neutral"], record["p_positive"])


def pearson_reference(x: list[float], y: list[float]) -> float:
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    return sxy / (math.sqrt(sxx) * math.sqrt(syy))


def stability_reference(
    records: list[dict], top_k: int = 1000, keep_fraction: float = 0.5
) -> tuple[float, float]:
    """Re-derive both stability correlations from raw annotation records."""
    def aggregates(subset: list[dict]):
        counts: Counter = Counter()
        sums: dict[str, list[float]] = defaultdict(list)
        for r in subset:
            counts[r["kb_id"]] += 1
            sums[r["kb_id"]].append(mention_value(r))
        return counts, {k: math.fsum(v) / len(v) for k, v in sums.items()}

    counts_all, means_all = aggregates(records)
    support = sorted(counts_all, key=lambda k: (-counts_all[k], k))[:top_k]

    by_class: dict[str, list[dict]] = defaultdict(list)
    for r in records:
        label = argmax_label(r["p_negative"], r["p_neutral"], r["p_positive"])
        by_class[label].append(r)
    kept: list[dict] = []
    for label, group in by_class.items():
        quota = math.ceil(keep_fraction * len(group))
        ranked = sorted(
            group, key=lambda r: (-mention_confidence(r), r["doc_id"], r["start"], r["end"])
        )
        kept.extend(ranked[:quota])
    counts_kept, means_kept = aggregates(kept)

    x_m = [float(counts_all[e]) for e in support]
    y_m = [float(counts_kept.get(e, 0)) for e in support]
    both = [e for e in support if e in means_all and e in means_kept]
    x_s = [means_all[e] for e in both]
    y_s = [means_kept[e] for e in both]
    return pearson_reference(x_m, y_m), pearson_reference(x_s, y_s)


# ---------------------------------------------------------------- fact join

def orientation_label(left_right: float) -> str:
    for idx, bound in enumerate([2.0, 4.0, 6.0, 8.0]):
        if left_right < bound:
            return ORIENTATION_LABELS[idx]
    return ORIENTATION_LABELS[4]


def join_facts(
    survivors: list[dict],
    annotations: list[dict],
    persons: list[dict],
    parties: list[dict],
    crosswalk: dict[str, str],
    subsets: dict[str, set[str]],
    link_threshold: float = -0.2,
    mode: str = "argmax",
) -> list[dict]:
    """Nested-loop join mirroring the retained-mention fact definition."""
    docs = {d["doc_id"]: d for d in survivors}
    people = {p["kb_id"]: p for p in persons}
    party_scores = {p["party_kb_id"]: p["left_right"] for p in parties}
    facts = []
    for r in annotations:
        if r["entity_type"] != "person":
            continue
        if r["kb_id"] is None or r["link_log_likelihood"] is None:
            continue
        if not r["link_log_likelihood"] > link_threshold:
            continue
        doc = docs.get(r["doc_id"])
        person = people.get(r["kb_id"])
        if doc is None or person is None:
            continue
        orientation = None
        if person["is_politician"]:
            for party_id in person["party_ids"]:
                mapped = crosswalk.get(party_id)
                if mapped is not None and mapped in party_scores:
                    orientation = orientation_label(party_scores[mapped])
                    break
        published = date.fromisoformat(doc["published_at"])
        facts.append(
            {
                "doc_id": doc["doc_id"],
                "outlet": doc["outlet"],
                "published": published,
                "year": published.year,
                "kb_id": person["kb_id"],
                "name": person["name"],
                "gender": person["gender"],
                "birth": date.fromisoformat(person["birth_date"])
                if person["birth_date"]
                else None,
                "country": person["country"],
                "is_politician": person["is_politician"],
                "orientation": orientation,
                "score": mention_value(r, mode),
                "topics": {t for t, ids in subsets.items() if doc["doc_id"] in ids},
            }
        )
    return facts


# ---------------------------------------------------------------- report oracles

def _mean(values: list[float]) -> float:
    return math.fsum(values) / len(values)


def _politicians(facts: list[dict]) -> list[dict]:
    return [f for f in facts if f["is_politician"]]


def _group(facts: list[dict], by: str) -> dict[str, list[dict]]:
    grouped: dict[str, list[dict]] = defaultdict(list)
    for f in facts:
        if by == "outlet":
            grouped[f["outlet"]].append(f)
        else:
            for t in f["topics"]:
                grouped[t].append(f)
    return grouped


def _size_order(grouped: dict[str, list[dict]]) -> list[str]:
    return sorted(grouped, key=lambda g: (-len(grouped[g]), g))


def report_outlet_sentiment(facts: list[dict], min_mentions: int = 1):
    pol = _politicians(facts)
    grouped = _group(pol, "outlet")
    rows = [
        (o, len(grouped[o]), _mean([f["score"] for f in grouped[o]]))
        for o in _size_order(grouped)
        if len(grouped[o]) >= min_mentions
    ]
    rows.append((CORPUS_GROUP, len(pol), _mean([f["score"] for f in pol]) if pol else None))
    return ("outlet", "mentions", "mean_sentiment"), rows


def report_orientation_mentions(facts: list[dict], by: str):
    oriented = [f for f in _politicians(facts) if f["orientation"] is not None]
    grouped = _group(oriented, by)
    rows = []
    for g in _size_order(grouped):
        total = len(grouped[g])
        counts = Counter(f["orientation"] for f in grouped[g])
        for label in ORIENTATION_LABELS:
            rows.append((g, label, counts.get(label, 0), counts.get(label, 0) / total))
    return (by, "orientation", "mentions", "share"), rows


def report_orientation_sentiment(facts: list[dict], by: str):
    oriented = [f for f in _politicians(facts) if f["orientation"] is not None]
    grouped = _group(oriented, by)
    rows = []
    for g in _size_order(grouped):
        group_mean = _mean([f["score"] for f in grouped[g]])
        per_label: dict[str, list[float]] = defaultdict(list)
        for f in grouped[g]:
            per_label[f["orientation"]].append(f["score"])
        for label in ORIENTATION_LABELS:
            if label in per_label:
                m = _mean(per_label[label])
                rows.append((g, group_mean, label, m, m - group_mean))
            else:
                rows.append((g, group_mean, label, None, None))
    return (by, "group_mean_sentiment", "orientation", "orientation_mean_sentiment", "deviation"), rows


def _per_politician(facts: list[dict]) -> dict[str, list[dict]]:
    per: dict[str, list[dict]] = defaultdict(list)
    for f in _politicians(facts):
        per[f["kb_id"]].append(f)
    return per


def report_top_politicians(facts: list[dict], k: int = 10):
    per = _per_politician(facts)
    order = sorted(per, key=lambda i: (-len(per[i]), i))
    rows = []
    for rank, kb_id in enumerate(order[:k], start=1):
        group = per[kb_id]
        by_year: dict[int, list[float]] = defaultdict(list)
        for f in group:
            by_year[f["year"]].append(f["score"])
        year_means = [_mean(v) for v in by_year.values()]
        mu = math.fsum(year_means) / len(year_means)
        std = math.sqrt(math.fsum((m - mu) ** 2 for m in year_means) / len(year_means))
        rows.append(
            (rank, kb_id, group[0]["name"], len(group), _mean([f["score"] for f in group]), std)
        )
    return ("rank", "kb_id", "name", "mentions", "mean_sentiment", "yearly_sentiment_std"), rows


def report_extreme_politicians(facts: list[dict], pool: int = 100, k: int = 10):
    per = _per_politician(facts)
    order = sorted(per, key=lambda i: (-len(per[i]), i))[:pool]
    means = {i: _mean([f["score"] for f in per[i]]) for i in order}
    rows = []
    for label, ranked in (
        ("highest", sorted(order, key=lambda i: (-means[i], -len(per[i]), i))[:k]),
        ("lowest", sorted(order, key=lambda i: (means[i], -len(per[i]), i))[:k]),
    ):
        for rank, kb_id in enumerate(ranked, start=1):
            rows.append((label, rank, kb_id, per[kb_id][0]["name"], len(per[kb_id]), means[kb_id]))
    return ("list", "rank", "kb_id", "name", "mentions", "mean_sentiment"), rows


def report_gender(facts: list[dict], top_outlets: int | None = None):
    pol = _politicians(facts)
    sections: list[tuple[str, str, list[dict]]] = []
    grouped = _group(pol, "outlet")
    outlets = _size_order(grouped)
    if top_outlets is not None:
        outlets = outlets[:top_outlets]
    sections.extend(("outlet", o, grouped[o]) for o in outlets)
    by_year: dict[int, list[dict]] = defaultdict(list)
    for f in pol:
        by_year[f["year"]].append(f)
    sections.extend(("year", str(y), by_year[y]) for y in sorted(by_year))
    sections.append(("corpus", CORPUS_GROUP, pol))
    rows = []
    for group_type, name, group in sections:
        if not group:
            continue
        per_gender: dict[str, list[float]] = defaultdict(list)
        for f in group:
            per_gender[f["gender"]].append(f["score"])
        for gender in GENDER_ORDER:
            if gender in per_gender:
                scores = per_gender[gender]
                rows.append(
                    (group_type, name, gender, len(scores), len(scores) / len(group), _mean(scores))
                )
    return ("group_type", "group", "gender", "mentions", "share", "mean_sentiment"), rows


def report_age(facts: list[dict], top_outlets: int | None = None):
    pol = _politicians(facts)

    def age_row(name: str, group: list[dict]):
        ages = [
            (f["published"] - f["birth"]).days / 365.2425 for f in group if f["birth"] is not None
        ]
        return (name, len(ages), _mean(ages) if ages else None)

    grouped = _group(pol, "outlet")
    outlets = _size_order(grouped)
    if top_outlets is not None:
        outlets = outlets[:top_outlets]
    rows = [age_row(o, grouped[o]) for o in outlets]
    rows.append(age_row(CORPUS_GROUP, pol))
    return ("outlet", "mentions_with_birth_date", "mean_age"), rows


def report_source_similarity(facts: list[dict], support_size: int = 1000, floor: int = 10):
    pol = _politicians(facts)
    per = _per_politician(facts)
    support = sorted(per, key=lambda i: (-len(per[i]), i))[:support_size]

    def vectors(group: list[dict]):
        counts = Counter(f["kb_id"] for f in group)
        scores: dict[str, list[float]] = defaultdict(list)
        for f in group:
            scores[f["kb_id"]].append(f["score"])
        mention_vec = [float(counts.get(e, 0)) for e in support]
        sentiment_vec = {
            e: _mean(scores[e]) for e in support if counts.get(e, 0) >= max(1, floor)
        }
        return mention_vec, sentiment_vec

    def cosine(a: list[float], b: list[float]):
        na = math.sqrt(math.fsum(v * v for v in a))
        nb = math.sqrt(math.fsum(v * v for v in b))
        if na == 0.0 or nb == 0.0:
            return None
        return math.fsum(x * y for x, y in zip(a, b)) / (na * nb)

    corpus_m, corpus_s = vectors(pol)
    grouped = _group(pol, "outlet")
    cos: dict[str, tuple] = {}
    for outlet, group in grouped.items():
        m_vec, s_vec = vectors(group)
        shared = [e for e in support if e in s_vec and e in corpus_s]
        cos[outlet] = (
            cosine(m_vec, corpus_m),
            cosine([s_vec[e] for e in shared], [corpus_s[e] for e in shared]) if shared else None,
        )

    def ranking(which: int) -> dict[str, int]:
        defined = sorted(
            (o for o in cos if cos[o][which] is not None), key=lambda o: (-cos[o][which], o)
        )
        undefined = sorted(o for o in cos if cos[o][which] is None)
        return {o: r for r, o in enumerate(defined + undefined, start=1)}

    rank_m, rank_s = ranking(0), ranking(1)
    rows = [(o, cos[o][0], rank_m[o], cos[o][1], rank_s[o]) for o in sorted(cos)]
    return ("outlet", "mentions_cosine", "mentions_rank", "sentiment_cosine", "sentiment_rank"), rows


def report_temporal(
    facts: list[dict],
    dimension: str,
    measure: str,
    window: tuple[date, date],
    top_k: int = 10,
):
    pol = _politicians(facts)
    years = list(range(window[0].year, window[1].year + 1))
    if dimension == "orientation":
        scoped = [f for f in pol if f["orientation"] is not None]
        values = ORIENTATION_LABELS
        labels = {v: (v,) for v in values}
        columns = ("year", "orientation", "value")
        of = lambda f: f["orientation"]
    elif dimension == "politician":
        per = _per_politician(facts)
        values = sorted(per, key=lambda i: (-len(per[i]), i))[:top_k]
        labels = {v: (v, per[v][0]["name"]) for v in values}
        scoped = [f for f in pol if f["kb_id"] in set(values)]
        columns = ("year", "kb_id", "name", "value")
        of = lambda f: f["kb_id"]
    else:
        present = {f["gender"] for f in pol}
        values = [g for g in GENDER_ORDER if g in present]
        labels = {v: (v,) for v in values}
        scoped = pol
        columns = ("year", "gender", "value")
        of = lambda f: f["gender"]
    cells: dict[tuple, list[float]] = defaultdict(list)
    for f in scoped:
        cells[(f["year"], of(f))].append(f["score"])
    rows = []
    for year in years:
        for value in values:
            scores = cells.get((year, value))
            if not scores:
                cell = None
            elif measure == "mentions":
                cell = len(scores)
            else:
                cell = _mean(scores)
            rows.append((year, *labels[value], cell))
    return columns, rows


def report_corpus_stats(survivors: list[dict], annotations: list[dict], facts: list[dict]):
    pol = _politicians(facts)
    rows: list[tuple] = [
        ("corpus", "documents", len(survivors)),
        ("mentions", "all_persons", sum(1 for r in annotations if r["entity_type"] == "person")),
        ("mentions", "linked_persons", len(facts)),
        ("mentions", "politicians", len(pol)),
    ]
    by_country = Counter(f["country"] for f in pol)
    rows += [("country", c, n) for c, n in sorted(by_country.items(), key=lambda kv: (-kv[1], kv[0]))]
    by_orientation = Counter(f["orientation"] for f in pol if f["orientation"] is not None)
    rows += [("orientation", label, by_orientation.get(label, 0)) for label in ORIENTATION_LABELS]
    by_gender = Counter(f["gender"] for f in pol)
    rows += [("gender", g, by_gender[g]) for g in GENDER_ORDER if by_gender.get(g)]
    by_topic: Counter = Counter()
    for f in pol:
        by_topic.update(f["topics"])
    rows += [("topic", t, by_topic[t]) for t in sorted(by_topic)]
    by_outlet = Counter(d["outlet"] for d in survivors)
    rows += [
        ("articles_by_outlet", o, n)
        for o, n in sorted(by_outlet.items(), key=lambda kv: (-kv[1], kv[0]))
    ]
    by_year = Counter(date.fromisoformat(d["published_at"]).year for d in survivors)
    rows += [("articles_by_year", str(y), by_year[y]) for y in sorted(by_year)]
    return ("section", "key", "count"), rows


# ---------------------------------------------------------------- full pipeline

def reports_from_artifacts(out_dir: str | Path, fixture_dir: str | Path) -> dict[str, tuple]:
    """Every report id -> (columns, rows), re-derived from stage artifacts."""
    out_dir = Path(out_dir)
    fixture_dir = Path(fixture_dir)
    config = json.loads((fixture_dir / "config.json").read_text(encoding="utf-8"))
    survivors = load_jsonl(out_dir / "survivors.jsonl")
    annotations = load_jsonl(out_dir / "annotations.jsonl")
    persons = load_jsonl(fixture_dir / "persons.jsonl")
    parties = load_jsonl(fixture_dir / "parties.jsonl")
    crosswalk = load_crosswalk(fixture_dir / "crosswalk.csv")
    topics = json.loads((fixture_dir / "topics.json").read_text(encoding="utf-8"))
    subsets = topic_subsets(survivors, topics)
    facts = join_facts(
        survivors,
        annotations,
        persons,
        parties,
        crosswalk,
        subsets,
        link_threshold=config["link_threshold"],
        mode=config["scoring_mode"],
    )
    window = (date.fromisoformat(config["window"][0]), date.fromisoformat(config["window"][1]))
    rp = config["reports"]
    result = {
        "outlet_sentiment": report_outlet_sentiment(facts, rp["outlet_min_mentions"]),
        "orientation_mentions_by_outlet": report_orientation_mentions(facts, "outlet"),
        "orientation_mentions_by_topic": report_orientation_mentions(facts, "topic"),
        "orientation_sentiment_by_outlet": report_orientation_sentiment(facts, "outlet"),
        "orientation_sentiment_by_topic": report_orientation_sentiment(facts, "topic"),
        "top_politicians": report_top_politicians(facts, rp["top_politicians"]),
        "extreme_politicians": report_extreme_politicians(facts, rp["extreme_pool"], rp["extreme_k"]),
        "gender_representation": report_gender(facts, rp["top_outlets"]),
        "age_by_outlet": report_age(facts, rp["top_outlets"]),
        "source_similarity": report_source_similarity(
            facts, rp["support_size"], rp["sentiment_floor"]
        ),
        "corpus_stats": report_corpus_stats(survivors, annotations, facts),
    }
    for dimension in ("orientation", "politician", "gender"):
        for measure in ("mentions", "mean_sentiment"):
            result[f"temporal_{dimension}_{measure}"] = report_temporal(
                facts, dimension, measure, window, rp["temporal_top_politicians"]
            )
    return result


# ---------------------------------------------------------------- CSV text

def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def rows_to_csv(columns: tuple, rows: list[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()
