"""Pipeline command line.

Subcommands cover each stage: ``ingest``, ``dedup``, ``annotate-mock``,
``import-annotations``, ``kb-load``, ``index``, ``topic-select``,
``analyze``, ``stats``. Stages communicate only through on-disk artifacts in
the configured output directory (documents.jsonl, survivors.jsonl,
annotations.jsonl, reports/), so any stage can be swapped for an external
producer emitting the same schema. Every stage writes a machine-readable run
log holding counts and content hashes, never timestamps or absolute paths,
so reruns with the same inputs produce identical bytes.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import date
from importlib import resources
from pathlib import Path

from . import analytics, reports
from .annotations import (
    DEFAULT_LINK_THRESHOLD,
    annotations_to_text,
    filter_linked,
    mock_annotate,
    read_annotations,
)
from .dedup import (
    DEFAULT_PERMUTATIONS,
    DEFAULT_SHINGLE_SIZE,
    DEFAULT_THRESHOLD,
    dedup_per_domain,
)
from .errors import ConfigError, PoliscopeError
from .ingest import (
    CorpusManifest,
    corpus_content_hash,
    corpus_to_text,
    filter_min_length,
    load_corpus,
)
from .kb import load_kb
from .reports import Provenance, atomic_write_text, config_hash, write_json
from .sentiment import SCORING_MODES
from .topics import build_index, index_to_dict, load_topics, select_topic_subset

DEFAULT_MIN_CHARS = 200

PATH_KEYS = (
    "corpus",
    "outlets",
    "documents",
    "survivors",
    "annotations",
    "gazetteer",
    "rules",
    "persons",
    "parties",
    "crosswalk",
    "topics",
    "output_dir",
)


@dataclass(frozen=True)
class DedupParams:
    shingle_size: int = DEFAULT_SHINGLE_SIZE
    permutations: int = DEFAULT_PERMUTATIONS
    threshold: float = DEFAULT_THRESHOLD
    workers: int = 1


@dataclass(frozen=True)
class ReportParams:
    outlet_min_mentions: int = 1
    top_politicians: int = 10
    extreme_pool: int = 100
    extreme_k: int = 10
    top_outlets: int | None = None
    support_size: int = analytics.DEFAULT_SUPPORT_SIZE
    sentiment_floor: int = analytics.DEFAULT_SENTIMENT_FLOOR
    temporal_top_politicians: int = 10


@dataclass
class PipelineConfig:
    paths: dict[str, str] = field(default_factory=dict)
    window: tuple[date, date] | None = None
    min_chars: int = DEFAULT_MIN_CHARS
    link_threshold: float = DEFAULT_LINK_THRESHOLD
    scoring_mode: str = "argmax"
    seed: int | None = None
    dedup: DedupParams = field(default_factory=DedupParams)
    reports: ReportParams = field(default_factory=ReportParams)

    @property
    def output_dir(self) -> Path:
        env = os.environ.get("POLISCOPE_OUTPUT_DIR")
        if env:
            return Path(env)
        return Path(self.paths.get("output_dir", "out"))

    def semantic_params(self) -> dict:
        """Parameters that define the computation; paths never participate."""
        return {
            "window": [d.isoformat() for d in self.window] if self.window else None,
            "min_chars": self.min_chars,
            "link_threshold": self.link_threshold,
            "scoring_mode": self.scoring_mode,
            "seed": self.seed,
            "dedup": dataclasses.asdict(self.dedup),
            "reports": dataclasses.asdict(self.reports),
        }


def _build_params(cls, raw: dict, label: str):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(raw) - names
    if unknown:
        raise ConfigError(f"unknown {label} key {sorted(unknown)[0]!r}")
    try:
        return cls(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {label} section: {exc}")


def load_config(path: str | Path) -> PipelineConfig:
    """Parse a pipeline config; relative paths resolve against the config's directory."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} does not exist")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc.msg}")
    base = Path(path).resolve().parent
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    known = {"paths", "window", "min_chars", "link_threshold", "scoring_mode", "seed", "dedup", "reports"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config key {sorted(unknown)[0]!r}")

    paths = raw.get("paths", {})
    if not isinstance(paths, dict):
        raise ConfigError("paths must be an object")
    bad = set(paths) - set(PATH_KEYS)
    if bad:
        raise ConfigError(f"unknown path key {sorted(bad)[0]!r}")

    window = raw.get("window")
    if window is not None:
        try:
            window = (date.fromisoformat(window[0]), date.fromisoformat(window[1]))
        except (TypeError, ValueError, IndexError, KeyError):
            raise ConfigError("window must be a pair of ISO dates")
        if window[0] > window[1]:
            raise ConfigError("window start is after window end")

    scoring_mode = raw.get("scoring_mode", "argmax")
    if scoring_mode not in SCORING_MODES:
        raise ConfigError(f"scoring_mode must be one of {SCORING_MODES}")

    seed = raw.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ConfigError("seed must be an integer")

    return PipelineConfig(
        paths={k: str(base / str(v)) for k, v in paths.items()},
        window=window,
        min_chars=int(raw.get("min_chars", DEFAULT_MIN_CHARS)),
        link_threshold=float(raw.get("link_threshold", DEFAULT_LINK_THRESHOLD)),
        scoring_mode=scoring_mode,
        seed=seed,
        dedup=_build_params(DedupParams, raw.get("dedup", {}), "dedup"),
        reports=_build_params(ReportParams, raw.get("reports", {}), "reports"),
    )


def _require_file(cfg: PipelineConfig, key: str) -> Path:
    value = cfg.paths.get(key)
    if value is None:
        raise ConfigError(f"config path {key!r} is required for this stage")
    path = Path(value)
    if not path.is_file():
        raise ConfigError(f"configured {key} file {path} does not exist")
    return path


def _artifact(cfg: PipelineConfig, key: str, default_name: str) -> Path:
    """Stage input: explicit config path if set, else the well-known artifact."""
    value = cfg.paths.get(key)
    path = Path(value) if value is not None else cfg.output_dir / default_name
    if not path.is_file():
        raise ConfigError(f"{key} file {path} does not exist; run the producing stage first")
    return path


def _require_seed(cfg: PipelineConfig) -> int:
    if cfg.seed is None:
        raise ConfigError("seed is required for this stage")
    return cfg.seed


def _outlets_path(cfg: PipelineConfig) -> Path | None:
    value = cfg.paths.get("outlets")
    if value is None:
        return None
    path = Path(value)
    if not path.is_file():
        raise ConfigError(f"configured outlets file {path} does not exist")
    return path


def _load_manifest(cfg: PipelineConfig, key: str, default_name: str) -> CorpusManifest:
    manifest = load_corpus(_artifact(cfg, key, default_name), _outlets_path(cfg), cfg.window)
    if manifest.errors:
        first = manifest.errors[0]
        raise ConfigError(f"{key} file is not a clean corpus artifact: line {first.line}: {first.message}")
    return manifest


def _topics_path(cfg: PipelineConfig) -> Path:
    value = cfg.paths.get("topics")
    if value is not None:
        path = Path(value)
        if not path.is_file():
            raise ConfigError(f"configured topics file {path} does not exist")
        return path
    return Path(str(resources.files("poliscope.data").joinpath("topics.json")))


def _write_log(cfg: PipelineConfig, stage: str, payload: dict) -> None:
    write_json({"stage": stage, **payload}, cfg.output_dir / f"{stage.replace('-', '_')}_log.json")


def cmd_ingest(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    corpus_path = _require_file(cfg, "corpus")
    manifest = load_corpus(corpus_path, _outlets_path(cfg), cfg.window)
    kept = filter_min_length(manifest, cfg.min_chars)
    atomic_write_text(cfg.output_dir / "documents.jsonl", corpus_to_text(kept))
    _write_log(
        cfg,
        "ingest",
        {
            "parsed_documents": len(manifest.documents),
            "kept_documents": len(kept.documents),
            "rejected_records": len(manifest.errors),
            "errors": [
                {"line": e.line, "field": e.field, "message": e.message} for e in manifest.errors
            ],
            "window": [d.isoformat() for d in kept.window],
            "min_chars": cfg.min_chars,
            "corpus_hash": corpus_content_hash(kept),
        },
    )
    return 0


def cmd_dedup(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    seed = _require_seed(cfg)
    manifest = _load_manifest(cfg, "documents", "documents.jsonl")
    survivors, clusters = dedup_per_domain(
        manifest.documents,
        threshold=cfg.dedup.threshold,
        w=cfg.dedup.shingle_size,
        n=cfg.dedup.permutations,
        seed=seed,
        workers=cfg.dedup.workers,
    )
    kept = CorpusManifest(
        documents=list(survivors),
        window=manifest.window,
        outlet_metadata=dict(manifest.outlet_metadata),
        errors=[],
    )
    atomic_write_text(cfg.output_dir / "survivors.jsonl", corpus_to_text(kept))
    write_json(
        {
            "clusters": [
                {"domain": c.domain, "members": list(c.members), "survivor": c.survivor}
                for c in clusters
            ]
        },
        cfg.output_dir / "clusters.json",
    )
    _write_log(
        cfg,
        "dedup",
        {
            "input_documents": len(manifest.documents),
            "survivors": len(survivors),
            "duplicate_clusters": len(clusters),
            "params": dataclasses.asdict(cfg.dedup),
            "seed": seed,
            "corpus_hash": corpus_content_hash(kept),
        },
    )
    return 0


def _load_json_map(path: Path, label: str) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
    ):
        raise ConfigError(f"{label} file {path} must be a JSON object of strings")
    return raw


def cmd_annotate_mock(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    seed = _require_seed(cfg)
    manifest = _load_manifest(cfg, "survivors", "survivors.jsonl")
    gazetteer = _load_json_map(_require_file(cfg, "gazetteer"), "gazetteer")
    rules = _load_json_map(_require_file(cfg, "rules"), "rules")
    mentions = mock_annotate(manifest, gazetteer, rules, seed=seed)
    atomic_write_text(cfg.output_dir / "annotations.jsonl", annotations_to_text(mentions))
    _write_log(
        cfg,
        "annotate-mock",
        {
            "documents": len(manifest.documents),
            "mentions": len(mentions),
            "gazetteer_entries": len(gazetteer),
            "rules": len(rules),
            "seed": seed,
        },
    )
    return 0


def cmd_import_annotations(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    manifest = _load_manifest(cfg, "survivors", "survivors.jsonl")
    source = _require_file(cfg, "annotations")
    mentions = read_annotations(source, manifest)
    atomic_write_text(cfg.output_dir / "annotations.jsonl", annotations_to_text(mentions))
    _write_log(
        cfg,
        "import-annotations",
        {"documents": len(manifest.documents), "mentions": len(mentions)},
    )
    return 0


def cmd_kb_load(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    kb = load_kb(
        _require_file(cfg, "persons"), _require_file(cfg, "parties"), _require_file(cfg, "crosswalk")
    )
    coverage = kb.coverage()
    write_json(coverage, cfg.output_dir / "kb_coverage.json")
    _write_log(
        cfg,
        "kb-load",
        {
            "persons": len(kb.persons),
            "parties": len(kb.parties),
            "crosswalk_entries": len(kb.crosswalk),
            **coverage,
        },
    )
    return 0


def cmd_index(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    manifest = _load_manifest(cfg, "survivors", "survivors.jsonl")
    index = build_index(manifest)
    write_json(index_to_dict(index), cfg.output_dir / "index.json")
    _write_log(
        cfg,
        "index",
        {
            "documents": index.doc_count,
            "terms": len(index.postings),
            "avg_doc_length": index.avg_doc_length,
        },
    )
    return 0


def cmd_topic_select(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    manifest = _load_manifest(cfg, "survivors", "survivors.jsonl")
    topics = load_topics(_topics_path(cfg))
    index = build_index(manifest)
    if args.topic is not None:
        topic = topics.get(args.topic)
        if topic is None:
            raise ConfigError(f"unknown topic {args.topic!r}; configured: {sorted(topics)}")
        for doc_id in sorted(select_topic_subset(index, topic)):
            print(doc_id)
        return 0
    subsets = {tid: sorted(select_topic_subset(index, t)) for tid, t in sorted(topics.items())}
    write_json(subsets, cfg.output_dir / "topic_subsets.json")
    _write_log(
        cfg,
        "topic-select",
        {"topics": len(subsets), "subset_sizes": {t: len(ids) for t, ids in subsets.items()}},
    )
    return 0


def _report_registry(cfg: PipelineConfig, manifest: CorpusManifest, mentions, facts, provenance):
    rp = cfg.reports
    window = cfg.window or manifest.window

    def temporal(dimension: str, measure: str):
        return lambda: analytics.temporal_series(
            facts,
            dimension,
            measure,
            window=window,
            top_k=rp.temporal_top_politicians,
            provenance=provenance,
        )

    registry = {
        "outlet_sentiment": lambda: analytics.outlet_sentiment(
            facts, rp.outlet_min_mentions, provenance=provenance
        ),
        "orientation_mentions_by_outlet": lambda: analytics.orientation_mention_distribution(
            facts, "outlet", provenance=provenance
        ),
        "orientation_mentions_by_topic": lambda: analytics.orientation_mention_distribution(
            facts, "topic", provenance=provenance
        ),
        "orientation_sentiment_by_outlet": lambda: analytics.orientation_sentiment_deviation(
            facts, "outlet", provenance=provenance
        ),
        "orientation_sentiment_by_topic": lambda: analytics.orientation_sentiment_deviation(
            facts, "topic", provenance=provenance
        ),
        "top_politicians": lambda: analytics.top_politicians(
            facts, rp.top_politicians, provenance=provenance
        ),
        "extreme_politicians": lambda: analytics.extreme_politicians(
            facts, rp.extreme_pool, rp.extreme_k, provenance=provenance
        ),
        "gender_representation": lambda: analytics.gender_reports(
            facts, top_outlets=rp.top_outlets, provenance=provenance
        ),
        "age_by_outlet": lambda: analytics.age_report(
            facts, top_outlets=rp.top_outlets, provenance=provenance
        ),
        "source_similarity": lambda: analytics.source_similarity_ranks(
            facts, rp.support_size, rp.sentiment_floor, provenance=provenance
        ),
        "corpus_stats": lambda: analytics.corpus_stats(
            manifest, mentions, facts, provenance=provenance
        ),
    }
    for dimension in ("orientation", "politician", "gender"):
        for measure in ("mentions", "mean_sentiment"):
            registry[f"temporal_{dimension}_{measure}"] = temporal(dimension, measure)
    return registry


def _run_analysis(cfg: PipelineConfig, report_ids: list[str] | None) -> dict:
    manifest = _load_manifest(cfg, "survivors", "survivors.jsonl")
    mentions = read_annotations(_artifact(cfg, "annotations", "annotations.jsonl"), manifest)
    linked = filter_linked(mentions, cfg.link_threshold)
    kb = load_kb(
        _require_file(cfg, "persons"), _require_file(cfg, "parties"), _require_file(cfg, "crosswalk")
    )
    topics = load_topics(_topics_path(cfg))
    index = build_index(manifest)
    subsets = {tid: select_topic_subset(index, t) for tid, t in topics.items()}
    facts = analytics.build_facts(manifest, linked, kb, subsets, cfg.scoring_mode)
    provenance = Provenance(
        config_hash=config_hash(cfg.semantic_params()),
        corpus_hash=corpus_content_hash(manifest),
        seed=cfg.seed,
    )
    registry = _report_registry(cfg, manifest, mentions, facts, provenance)
    if report_ids is None:
        report_ids = sorted(registry)
    unknown = [r for r in report_ids if r not in registry]
    if unknown:
        raise ConfigError(f"unknown report {unknown[0]!r}; available: {sorted(registry)}")
    report_dir = cfg.output_dir / "reports"
    for report_id in report_ids:
        table = registry[report_id]()
        reports.write_report_csv(table, report_dir / f"{report_id}.csv")
        reports.write_report_json(table, report_dir / f"{report_id}.json")
    return {
        "documents": len(manifest.documents),
        "mentions": len(mentions),
        "linked_mentions": len(linked),
        "facts": len(facts),
        "reports": sorted(report_ids),
        "config_hash": provenance.config_hash,
        "corpus_hash": provenance.corpus_hash,
        "seed": cfg.seed,
    }


def cmd_analyze(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    report_ids = None if args.all or args.report is None else [args.report]
    payload = _run_analysis(cfg, report_ids)
    _write_log(cfg, "analyze", payload)
    return 0


def cmd_stats(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    payload = _run_analysis(cfg, ["corpus_stats"])
    _write_log(cfg, "stats", payload)
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "dedup": cmd_dedup,
    "annotate-mock": cmd_annotate_mock,
    "import-annotations": cmd_import_annotations,
    "kb-load": cmd_kb_load,
    "index": cmd_index,
    "topic-select": cmd_topic_select,
    "analyze": cmd_analyze,
    "stats": cmd_stats,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poliscope",
        description="Political-news analytics pipeline: ingest, dedup, annotate, aggregate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="pipeline config JSON")
        p.add_argument("--out", help="output directory override")
        p.add_argument("--seed", type=int, help="seed override")
        if name == "topic-select":
            p.add_argument("--topic", help="print doc_ids for one topic instead of writing all subsets")
        if name == "analyze":
            group = p.add_mutually_exclusive_group()
            group.add_argument("--report", help="single report id")
            group.add_argument("--all", action="store_true", help="every report (default)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.out:
            cfg.paths["output_dir"] = args.out
        if args.seed is not None:
            cfg.seed = args.seed
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    except PoliscopeError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
