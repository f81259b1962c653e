"""Shared fixtures: the committed corpus fixture and one full pipeline run."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from poliscope.cli import main as cli_main
from poliscope.ingest import load_corpus

TESTS_DIR = Path(__file__).resolve().parent
FIXTURE_DIR = TESTS_DIR / "fixtures"
GOLDEN_DIR = TESTS_DIR / "golden"
CONFIG_PATH = FIXTURE_DIR / "config.json"


def run_cli(*argv: str) -> int:
    return cli_main(list(argv))


def run_stages(out_dir: Path, *stages: list[str]) -> None:
    for stage in stages:
        code = run_cli(stage[0], "--config", str(CONFIG_PATH), "--out", str(out_dir), *stage[1:])
        assert code == 0, f"stage {stage} exited with {code}"


@pytest.fixture(scope="session")
def fixture_config() -> dict:
    return json.loads(CONFIG_PATH.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def planted() -> dict:
    return json.loads((FIXTURE_DIR / "planted.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def pipeline_dir(tmp_path_factory) -> Path:
    """One full pipeline run (ingest through analyze --all) shared by the session."""
    out = tmp_path_factory.mktemp("pipeline")
    run_stages(
        out,
        ["ingest"],
        ["dedup"],
        ["annotate-mock"],
        ["kb-load"],
        ["index"],
        ["topic-select"],
        ["analyze", "--all"],
    )
    return out


@pytest.fixture(scope="session")
def raw_manifest():
    """The fixture corpus as parsed straight from disk (window applied)."""
    from datetime import date

    return load_corpus(
        FIXTURE_DIR / "corpus.jsonl",
        FIXTURE_DIR / "outlets.json",
        window=(date(2016, 1, 1), date(2022, 12, 31)),
    )


@pytest.fixture(scope="session")
def survivors_manifest(pipeline_dir):
    return load_corpus(pipeline_dir / "survivors.jsonl", FIXTURE_DIR / "outlets.json")
