"""Report tables with provenance, plus CSV/JSON serialization.

Serialization rules keep outputs byte-stable across platforms: floats are
written with 12 significant digits, line endings are always "\\n", cells are
RFC-4180 quoted, and missing values serialize as empty CSV cells / JSON
nulls. Artifact writes go through a temp file and an atomic rename so a
failed run never clobbers a previous complete output.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .kb import Orientation

Cell = None | str | int | float | date | Orientation


@dataclass(frozen=True)
class Provenance:
    config_hash: str
    corpus_hash: str
    seed: int | None

    def as_dict(self) -> dict:
        return {"config_hash": self.config_hash, "corpus_hash": self.corpus_hash, "seed": self.seed}


EMPTY_PROVENANCE = Provenance(config_hash="", corpus_hash="", seed=None)


@dataclass
class ReportTable:
    report_id: str
    columns: tuple[str, ...]
    rows: list[tuple]
    sort_key: str
    provenance: Provenance = field(default=EMPTY_PROVENANCE)

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"report {self.report_id}: row width {len(row)} != {len(self.columns)} columns"
                )


def format_cell(value: Cell) -> str:
    """Canonical CSV text for one cell; floats carry 12 significant digits."""
    if value is None:
        return ""
    if isinstance(value, Orientation):
        return value.label
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def report_to_csv_text(report: ReportTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def _json_cell(value: Cell):
    if isinstance(value, Orientation):
        return value.label
    if isinstance(value, date):
        return value.isoformat()
    return value


def report_to_dict(report: ReportTable) -> dict:
    return {
        "report_id": report.report_id,
        "columns": list(report.columns),
        "sort_key": report.sort_key,
        "rows": [[_json_cell(v) for v in row] for row in report.rows],
        "provenance": report.provenance.as_dict(),
    }


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def write_json(obj, path: str | Path) -> None:
    atomic_write_text(path, json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n")


def write_report_csv(report: ReportTable, path: str | Path) -> None:
    atomic_write_text(path, report_to_csv_text(report))


def write_report_json(report: ReportTable, path: str | Path) -> None:
    write_json(report_to_dict(report), path)


def config_hash(params: dict) -> str:
    """Hash of semantic parameters only; paths never participate."""
    canonical = json.dumps(params, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
