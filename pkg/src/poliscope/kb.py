"""Person and party reference data: loading, crosswalk joins, orientation buckets.

Party positions live on a 0-10 left-right scale and are bucketed into five
orientations: radical left [0, 2), center left [2, 4), center [4, 6),
center right [6, 8), radical right [8, 10]. Person records carry party
affiliations as encyclopedia party ids; a crosswalk CSV joins those to the
party table that holds the scale positions.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .errors import ReferentialIntegrityError, SchemaError

DAYS_PER_YEAR = 365.2425

GENDERS = ("male", "female", "other", "unknown")

PERSON_FIELDS = ("kb_id", "name", "gender", "birth_date", "country", "is_politician", "party_ids")
PARTY_FIELDS = ("party_kb_id", "name", "country", "left_right")
CROSSWALK_FIELDS = ("encyclopedia_party_id", "parlgov_party_id")


class Orientation(enum.IntEnum):
    """Five-way political orientation, ordered left to right."""

    RADICAL_LEFT = 0
    CENTER_LEFT = 1
    CENTER = 2
    CENTER_RIGHT = 3
    RADICAL_RIGHT = 4

    @property
    def label(self) -> str:
        return _ORIENTATION_LABELS[self]


_ORIENTATION_LABELS = {
    Orientation.RADICAL_LEFT: "radical_left",
    Orientation.CENTER_LEFT: "center_left",
    Orientation.CENTER: "center",
    Orientation.CENTER_RIGHT: "center_right",
    Orientation.RADICAL_RIGHT: "radical_right",
}

BUCKET_BOUNDS = (2.0, 4.0, 6.0, 8.0)


def orientation_of(left_right: float) -> Orientation:
    """Bucket a 0-10 left-right score; buckets are half-open except the last."""
    if not 0.0 <= left_right <= 10.0:
        raise ValueError(f"left-right score {left_right} outside [0, 10]")
    for idx, bound in enumerate(BUCKET_BOUNDS):
        if left_right < bound:
            return Orientation(idx)
    return Orientation.RADICAL_RIGHT


@dataclass(frozen=True)
class PersonRecord:
    kb_id: str
    name: str
    gender: str
    birth_date: date | None
    country: str
    is_politician: bool
    party_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.gender not in GENDERS:
            raise ValueError(f"unknown gender {self.gender!r}")


@dataclass(frozen=True)
class PartyRecord:
    party_kb_id: str
    name: str
    country: str
    left_right: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.left_right <= 10.0:
            raise ValueError(f"left-right score {self.left_right} outside [0, 10]")


@dataclass
class KnowledgeBase:
    persons: dict[str, PersonRecord] = field(default_factory=dict)
    parties: dict[str, PartyRecord] = field(default_factory=dict)
    crosswalk: dict[str, str] = field(default_factory=dict)

    def party_position(self, encyclopedia_party_id: str) -> float | None:
        """Left-right score for an encyclopedia party id, None if unmapped."""
        target = self.crosswalk.get(encyclopedia_party_id)
        if target is None:
            return None
        return self.parties[target].left_right

    def resolve_orientation(
        self, person: PersonRecord, published_at: date | None = None
    ) -> Orientation | None:
        """Orientation from the person's most recent party with a crosswalk entry.

        ``party_ids`` is ordered most recent first; the first mappable
        affiliation wins. None when no affiliation maps. ``published_at`` is
        accepted so callers can pass the article date, but affiliation is not
        yet time-resolved: the most recent mappable party wins regardless.
        """
        for party_id in person.party_ids:
            position = self.party_position(party_id)
            if position is not None:
                return orientation_of(position)
        return None

    def coverage(self) -> dict:
        """Orientation coverage over politician records."""
        politicians = [p for p in self.persons.values() if p.is_politician]
        mapped = sum(1 for p in politicians if self.resolve_orientation(p) is not None)
        return {
            "politician_records": len(politicians),
            "with_orientation": mapped,
            "coverage": mapped / len(politicians) if politicians else 0.0,
        }


def age_at(birth_date: date, published_at: date) -> float:
    """Age in years as day difference over the mean Gregorian year length."""
    if birth_date > published_at:
        raise ValueError(f"birth date {birth_date} after publication date {published_at}")
    return (published_at - birth_date).days / DAYS_PER_YEAR


def _parse_person(raw: dict, line_no: int) -> PersonRecord:
    for name in PERSON_FIELDS:
        if name not in raw:
            raise SchemaError("missing", line=line_no, field=name)
    birth = raw["birth_date"]
    if birth is not None:
        try:
            birth = date.fromisoformat(birth)
        except (TypeError, ValueError):
            raise SchemaError(f"invalid date {raw['birth_date']!r}", line=line_no, field="birth_date")
    party_ids = raw["party_ids"]
    if not isinstance(party_ids, list) or not all(isinstance(p, str) for p in party_ids):
        raise SchemaError("party_ids must be a list of strings", line=line_no, field="party_ids")
    if not isinstance(raw["is_politician"], bool):
        raise SchemaError("is_politician must be boolean", line=line_no, field="is_politician")
    try:
        return PersonRecord(
            kb_id=raw["kb_id"],
            name=raw["name"],
            gender=raw["gender"],
            birth_date=birth,
            country=raw["country"],
            is_politician=raw["is_politician"],
            party_ids=tuple(party_ids),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc), line=line_no)


def _parse_party(raw: dict, line_no: int) -> PartyRecord:
    for name in PARTY_FIELDS:
        if name not in raw:
            raise SchemaError("missing", line=line_no, field=name)
    try:
        return PartyRecord(
            party_kb_id=raw["party_kb_id"],
            name=raw["name"],
            country=raw["country"],
            left_right=float(raw["left_right"]),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc), line=line_no)


def _read_jsonl(path: str | Path) -> list[tuple[int, dict]]:
    records = []
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
            records.append((line_no, raw))
    return records


def load_kb(
    persons_path: str | Path, parties_path: str | Path, crosswalk_path: str | Path
) -> KnowledgeBase:
    """Load person and party tables plus the crosswalk joining them.

    Duplicate ids and crosswalk targets missing from the party table are
    errors. Persons whose parties lack a crosswalk entry load fine and simply
    resolve to no orientation.
    """
    kb = KnowledgeBase()
    for line_no, raw in _read_jsonl(parties_path):
        party = _parse_party(raw, line_no)
        if party.party_kb_id in kb.parties:
            raise SchemaError(
                f"duplicate party id {party.party_kb_id!r}", line=line_no, field="party_kb_id"
            )
        kb.parties[party.party_kb_id] = party

    with open(crosswalk_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CROSSWALK_FIELDS:
            raise SchemaError(
                f"crosswalk header must be {','.join(CROSSWALK_FIELDS)}", line=1
            )
        for row_no, row in enumerate(reader, start=2):
            source = row["encyclopedia_party_id"]
            target = row["parlgov_party_id"]
            if not source or not target:
                raise SchemaError("empty crosswalk id", line=row_no)
            if source in kb.crosswalk:
                raise SchemaError(f"duplicate crosswalk entry {source!r}", line=row_no)
            if target not in kb.parties:
                raise ReferentialIntegrityError(
                    f"crosswalk line {row_no}: party {target!r} is not in the party table"
                )
            kb.crosswalk[source] = target

    for line_no, raw in _read_jsonl(persons_path):
        person = _parse_person(raw, line_no)
        if person.kb_id in kb.persons:
            raise SchemaError(f"duplicate person id {person.kb_id!r}", line=line_no, field="kb_id")
        kb.persons[person.kb_id] = person
    return kb
