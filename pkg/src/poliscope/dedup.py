"""Near-duplicate removal: word-shingle MinHash signatures, LSH banding, per-domain clustering.

Documents are only ever compared within the same registrable domain; the
survivor of each cluster is the earliest-published member (ties broken by
doc_id). Candidate pairs proposed by LSH are always re-verified against the
signature-based Jaccard estimate before clustering, so banding only affects
recall, never precision beyond the estimator's own noise.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import DegenerateDocumentError
from .ingest import RawDocument
from .text import hash64, tokenize

DEFAULT_SHINGLE_SIZE = 5
DEFAULT_PERMUTATIONS = 256
DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class ShingleSet:
    shingles: frozenset[int]
    w: int


@dataclass(eq=False)
class MinHashSignature:
    values: np.ndarray  # uint64, one minimum per permutation
    seed: int

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class DuplicateCluster:
    domain: str
    members: tuple[str, ...]  # sorted doc_ids, len >= 2
    survivor: str


def shingle(text: str, w: int = DEFAULT_SHINGLE_SIZE) -> ShingleSet:
    """Hash every contiguous run of ``w`` tokens to a 64-bit shingle.

    Texts with fewer than ``w`` tokens (but at least one) yield the single
    shingle of all their tokens, so short texts still deduplicate exactly.
    """
    if w < 1:
        raise ValueError(f"shingle size must be >= 1, got {w}")
    tokens = tokenize(text)
    if not tokens:
        return ShingleSet(frozenset(), w)
    if len(tokens) < w:
        return ShingleSet(frozenset({hash64(" ".join(tokens))}), w)
    grams = {hash64(" ".join(tokens[i : i + w])) for i in range(len(tokens) - w + 1)}
    return ShingleSet(frozenset(grams), w)


def _mix64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; uint64 arithmetic wraps mod 2^64 by construction
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@lru_cache(maxsize=8)
def _permutation_keys(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2**64, size=n, dtype=np.uint64)


def signature(s: ShingleSet, n: int = DEFAULT_PERMUTATIONS, seed: int = 0) -> MinHashSignature:
    """MinHash signature: per permutation, the minimum keyed 64-bit mix over the set."""
    if n < 1:
        raise ValueError(f"number of permutations must be >= 1, got {n}")
    if not s.shingles:
        raise DegenerateDocumentError("empty shingle set has no signature")
    elements = np.fromiter(s.shingles, dtype=np.uint64, count=len(s.shingles))
    keys = _permutation_keys(n, seed)
    with np.errstate(over="ignore"):
        mixed = _mix64(elements[np.newaxis, :] ^ keys[:, np.newaxis])
    return MinHashSignature(values=mixed.min(axis=1), seed=seed)


def estimate_jaccard(a: MinHashSignature, b: MinHashSignature) -> float:
    """Fraction of equal signature positions; unbiased estimator of set Jaccard."""
    if a.n != b.n:
        raise ValueError(f"signature length mismatch: {a.n} != {b.n}")
    if a.seed != b.seed:
        raise ValueError(f"signature seed mismatch: {a.seed} != {b.seed}")
    return int(np.count_nonzero(a.values == b.values)) / a.n


@lru_cache(maxsize=32)
def optimal_band_rows(n: int, threshold: float) -> tuple[int, int]:
    """Choose (bands, rows) with bands*rows == n minimizing FP+FN area of the S-curve.

    False-positive area integrates the candidate probability 1-(1-s^r)^b below
    the threshold; false-negative area integrates its complement above.
    """
    best: tuple[float, int, int] | None = None
    for b in range(1, n + 1):
        if n % b:
            continue
        r = n // b
        fp, _ = quad(lambda s: 1.0 - (1.0 - s**r) ** b, 0.0, threshold)
        fn, _ = quad(lambda s: (1.0 - s**r) ** b, threshold, 1.0)
        cost = fp + fn
        if best is None or cost < best[0]:
            best = (cost, b, r)
    assert best is not None
    return best[1], best[2]


def lsh_candidate_pairs(
    signatures: list[tuple[str, MinHashSignature]], bands: int, rows: int
) -> set[tuple[str, str]]:
    """Pairs of ids sharing at least one band bucket. Superset filter, order-free."""
    buckets: dict[tuple[int, bytes], list[str]] = {}
    for doc_id, sig in signatures:
        for band in range(bands):
            key = (band, sig.values[band * rows : (band + 1) * rows].tobytes())
            buckets.setdefault(key, []).append(doc_id)
    pairs: set[tuple[str, str]] = set()
    for members in buckets.values():
        if len(members) < 2:
            continue
        ordered = sorted(members)
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                pairs.add((ordered[i], ordered[j]))
    return pairs


class _UnionFind:
    def __init__(self, ids: list[str]):
        self.parent = {i: i for i in ids}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic root: lexicographically smallest id wins
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _signatures(
    docs: list[RawDocument], w: int, n: int, seed: int, workers: int
) -> list[MinHashSignature | None]:
    def one(doc: RawDocument) -> MinHashSignature | None:
        s = shingle(doc.body, w)
        if not s.shingles:
            return None  # degenerate: treated as unique downstream
        return signature(s, n, seed)

    if workers <= 1:
        return [one(d) for d in docs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves input order, so the merge is deterministic
        return list(pool.map(one, docs))


def dedup_per_domain(
    docs: list[RawDocument],
    threshold: float = DEFAULT_THRESHOLD,
    w: int = DEFAULT_SHINGLE_SIZE,
    n: int = DEFAULT_PERMUTATIONS,
    seed: int = 0,
    workers: int = 1,
) -> tuple[list[RawDocument], list[DuplicateCluster]]:
    """Cluster near-duplicates within each domain and keep one survivor per cluster.

    Clustering is the transitive closure over candidate pairs whose estimated
    Jaccard reaches ``threshold``. Survivor: earliest ``published_at``, then
    smallest doc_id. Survivors keep the input order; only clusters with two
    or more members are reported.
    """
    if not (0.0 < threshold <= 1.0):
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    sigs = _signatures(docs, w, n, seed, workers)
    by_id = {d.doc_id: d for d in docs}
    if len(by_id) != len(docs):
        raise ValueError("duplicate doc_ids in dedup input")

    domains: dict[str, list[int]] = {}
    for idx, doc in enumerate(docs):
        domains.setdefault(doc.domain, []).append(idx)

    bands, rows = optimal_band_rows(n, threshold)
    clusters: list[DuplicateCluster] = []
    dropped: set[str] = set()

    for domain in sorted(domains):
        indices = [i for i in domains[domain] if sigs[i] is not None]
        if len(indices) < 2:
            continue
        domain_sigs = [(docs[i].doc_id, sigs[i]) for i in indices]
        uf = _UnionFind([doc_id for doc_id, _ in domain_sigs])
        sig_of = dict(domain_sigs)
        for id_a, id_b in lsh_candidate_pairs(domain_sigs, bands, rows):
            if estimate_jaccard(sig_of[id_a], sig_of[id_b]) >= threshold:
                uf.union(id_a, id_b)
        groups: dict[str, list[str]] = {}
        for doc_id, _ in domain_sigs:
            groups.setdefault(uf.find(doc_id), []).append(doc_id)
        for members in groups.values():
            if len(members) < 2:
                continue
            members = sorted(members)
            survivor = min(members, key=lambda i: (by_id[i].published_at, i))
            clusters.append(DuplicateCluster(domain=domain, members=tuple(members), survivor=survivor))
            dropped.update(m for m in members if m != survivor)

    clusters.sort(key=lambda c: (c.domain, c.members))
    survivors = [d for d in docs if d.doc_id not in dropped]
    return survivors, clusters
