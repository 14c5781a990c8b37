"""Lexicographic domain entities and their canonical dict serialization.

Entities serialize to plain dicts ("records") for persistence and for the
revision log. A revision snapshot is the record minus the ``version``
counter: the counter is storage bookkeeping (it equals the number of
revisions committed for the entity), while the snapshot captures the
editorial content that reverts restore byte-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import ValidationError

RELATION_TYPES = ("translation", "derivation", "compound", "alternative_form", "etymology")
SOURCE_KINDS = ("dictionary", "termbank", "fieldwork", "other")
ENTITY_KINDS = ("lexeme", "relation", "override")
REVISION_KINDS = ("create", "update", "delete", "approve", "revert", "paradigm-correction")
ROLES = ("editor", "admin")


@dataclass
class Lexeme:
    id: int
    lemma: str
    language: str
    pos: str
    contlex: Optional[str] = None
    homonym_index: int = 1
    verified: bool = False
    notes: str = ""
    external_links: list[dict[str, str]] = field(default_factory=list)
    version: int = 1

    def key(self) -> tuple[str, str, str, int]:
        return (self.lemma, self.language, self.pos, self.homonym_index)

    def to_record(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "lemma": self.lemma,
            "language": self.language,
            "pos": self.pos,
            "contlex": self.contlex,
            "homonym_index": self.homonym_index,
            "verified": self.verified,
            "notes": self.notes,
            "external_links": [dict(link) for link in self.external_links],
            "version": self.version,
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "Lexeme":
        return cls(
            id=rec["id"],
            lemma=rec["lemma"],
            language=rec["language"],
            pos=rec["pos"],
            contlex=rec.get("contlex"),
            homonym_index=rec.get("homonym_index", 1),
            verified=rec.get("verified", False),
            notes=rec.get("notes", ""),
            external_links=[dict(link) for link in rec.get("external_links", [])],
            version=rec.get("version", 1),
        )


@dataclass
class Attestation:
    source_id: int
    locus: Optional[str] = None

    def to_record(self) -> dict[str, Any]:
        return {"source_id": self.source_id, "locus": self.locus}

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "Attestation":
        return cls(source_id=rec["source_id"], locus=rec.get("locus"))


@dataclass
class Relation:
    id: int
    left: int
    right: int
    type: str
    verified: bool = False
    sources: list[Attestation] = field(default_factory=list)
    examples: list[dict[str, str]] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)
    version: int = 1

    def key(self) -> tuple[int, int, str]:
        return (self.left, self.right, self.type)

    def to_record(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "left": self.left,
            "right": self.right,
            "type": self.type,
            "verified": self.verified,
            "sources": [a.to_record() for a in self.sources],
            "examples": [dict(e) for e in self.examples],
            "metadata": dict(sorted(self.metadata.items())),
            "version": self.version,
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "Relation":
        return cls(
            id=rec["id"],
            left=rec["left"],
            right=rec["right"],
            type=rec["type"],
            verified=rec.get("verified", False),
            sources=[Attestation.from_record(a) for a in rec.get("sources", [])],
            examples=[dict(e) for e in rec.get("examples", [])],
            metadata=dict(rec.get("metadata", {})),
            version=rec.get("version", 1),
        )


@dataclass
class Source:
    id: int
    name: str
    kind: str = "dictionary"

    def to_record(self) -> dict[str, Any]:
        return {"id": self.id, "name": self.name, "kind": self.kind}

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "Source":
        return cls(id=rec["id"], name=rec["name"], kind=rec.get("kind", "dictionary"))


@dataclass
class Override:
    """A hand-corrected paradigm form that supersedes the generated one."""

    lexeme_id: int
    msd: str
    form: str

    @property
    def id(self) -> str:
        return f"{self.lexeme_id}:{self.msd}"

    def to_record(self) -> dict[str, Any]:
        return {"id": self.id, "lexeme_id": self.lexeme_id, "msd": self.msd, "form": self.form}

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "Override":
        return cls(lexeme_id=rec["lexeme_id"], msd=rec["msd"], form=rec["form"])


@dataclass
class ParadigmForm:
    msd: str
    form: Optional[str]  # None marks a gap: no generated form, no override
    origin: str = "generated"  # generated | override
    weight: float = 0.0

    def to_record(self) -> dict[str, Any]:
        return {"msd": self.msd, "form": self.form, "origin": self.origin, "weight": self.weight}


@dataclass
class MiniParadigmSpec:
    pos: str
    msds: list[str]
    full_msds: list[str]

    def __post_init__(self):
        missing = [m for m in self.msds if m not in self.full_msds]
        if missing:
            raise ValidationError(f"mini msds not in full list for {self.pos}: {missing}")


@dataclass
class Revision:
    id: int
    entity_kind: str
    entity_id: str  # stringified; override ids are composite
    editor: str
    at: str  # UTC ISO-8601, server-assigned
    kind: str
    before: Optional[dict[str, Any]] = None
    after: Optional[dict[str, Any]] = None

    def to_record(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "entity_kind": self.entity_kind,
            "entity_id": self.entity_id,
            "editor": self.editor,
            "at": self.at,
            "kind": self.kind,
            "before": self.before,
            "after": self.after,
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "Revision":
        return cls(**rec)


@dataclass
class User:
    id: int
    username: str
    display_name: str
    role: str = "editor"
    token_hash: Optional[str] = None

    def to_record(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "username": self.username,
            "display_name": self.display_name,
            "role": self.role,
            "token_hash": self.token_hash,
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "User":
        return cls(**rec)


def snapshot_of(record: dict[str, Any] | None) -> dict[str, Any] | None:
    """Revision snapshot: the record without the version counter."""
    if record is None:
        return None
    return {k: v for k, v in record.items() if k != "version"}


def validate_relation_type(rtype: str) -> None:
    if rtype not in RELATION_TYPES:
        raise ValidationError(f"unknown relation type {rtype!r}")


def validate_role(role: str) -> None:
    if role not in ROLES:
        raise ValidationError(f"unknown role {role!r}")
