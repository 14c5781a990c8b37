"""In-memory lexicon store with journaled persistence and full audit history.

All mutations run under one lock, produce exactly one Revision each (plus
one per cascaded deletion), and are committed to the journal before they
become visible in memory. An entity's ``version`` equals the number of
revisions committed for it, so every committed mutation bumps it by one
and idempotent no-ops (re-approving, empty patches) bump nothing.

Revision snapshots deliberately exclude the version counter: a revert
restores the editorial content byte-exactly while the counter keeps
increasing monotonically.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Optional

from .errors import ConflictError, NotFoundError, ValidationError
from .fst import Transducer, lookup
from .model import (
    Attestation,
    Lexeme,
    MiniParadigmSpec,
    Override,
    ParadigmForm,
    Relation,
    Revision,
    Source,
    User,
    snapshot_of,
    validate_relation_type,
    validate_role,
)
from .storage import Journal

DEFAULT_POS_TAGS = ("+N", "+V", "+A", "+Adv")


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


def parse_derivation_analysis(
    analysis: str, tag_prefix: str, pos_tags: Iterable[str]
) -> Optional[tuple[str, str]]:
    """Extract (base lemma, base pos) from an analyzer reading.

    The base lemma is everything before the first ``+``; the base part of
    speech is the last POS-like tag preceding the first derivation tag
    (the tags after it describe the derived word, not its base).
    Returns None when the reading carries no derivation tag or no base POS
    can be determined.
    """
    plus = analysis.find("+")
    if plus <= 0:
        return None
    base = analysis[:plus]
    tags = ["+" + part for part in analysis[plus + 1 :].split("+") if part]
    der_index = next((i for i, tag in enumerate(tags) if tag.startswith(tag_prefix)), None)
    if der_index is None:
        return None
    pos_candidates = [tag for tag in tags[:der_index] if tag in pos_tags]
    if not pos_candidates:
        return None
    return base, pos_candidates[-1].lstrip("+")


def _validate_lexeme_record(rec: dict[str, Any]) -> None:
    if not isinstance(rec.get("lemma"), str) or not rec["lemma"]:
        raise ValidationError("lemma must be a non-empty string")
    for field_name in ("language", "pos"):
        if not isinstance(rec.get(field_name), str) or not rec[field_name]:
            raise ValidationError(f"{field_name} must be a non-empty string")
    if rec.get("contlex") is not None and not isinstance(rec["contlex"], str):
        raise ValidationError("contlex must be a string or null")
    if not isinstance(rec.get("homonym_index", 1), int) or rec.get("homonym_index", 1) < 1:
        raise ValidationError("homonym_index must be a positive integer")
    if not isinstance(rec.get("verified", False), bool):
        raise ValidationError("verified must be a boolean")
    if not isinstance(rec.get("notes", ""), str):
        raise ValidationError("notes must be a string")
    for link in rec.get("external_links", []):
        if not isinstance(link, dict) or not link.get("title") or not link.get("url"):
            raise ValidationError("external links need a title and a url")


def _validate_relation_record(rec: dict[str, Any]) -> None:
    for field_name in ("left", "right"):
        if not isinstance(rec.get(field_name), int):
            raise ValidationError(f"{field_name} must be a lexeme id")
    if not isinstance(rec.get("verified", False), bool):
        raise ValidationError("verified must be a boolean")
    for att in rec.get("sources", []):
        if not isinstance(att, dict) or not isinstance(att.get("source_id"), int):
            raise ValidationError("attestations need a source_id")
        if att.get("locus") is not None and not isinstance(att["locus"], str):
            raise ValidationError("attestation locus must be a string or null")
    for example in rec.get("examples", []):
        if not isinstance(example, dict) or not isinstance(example.get("text"), str):
            raise ValidationError("examples need a text")
    metadata = rec.get("metadata", {})
    if not isinstance(metadata, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in metadata.items()
    ):
        raise ValidationError("metadata must map strings to strings")


def generate_paradigm(
    lemma: str,
    msds: Iterable[str],
    generator: Transducer,
    overrides: dict[str, str],
) -> list[ParadigmForm]:
    """Inflect lemma for each msd; overrides win, gaps appear as form=None."""
    forms: list[ParadigmForm] = []
    for msd in msds:
        if msd in overrides:
            forms.append(ParadigmForm(msd, overrides[msd], "override"))
            continue
        results = sorted(lookup(generator, lemma + msd), key=lambda r: (r.weight, r.output))
        if not results:
            forms.append(ParadigmForm(msd, None, "generated"))
        else:
            forms.extend(ParadigmForm(msd, r.output, "generated", r.weight) for r in results)
    return forms


class LexiconStore:
    def __init__(self, journal: Journal | None = None):
        self.journal = journal
        self.lock = threading.RLock()
        self._batch_ops: list[dict] | None = None
        self._reset()
        if journal is not None:
            self._load()

    @classmethod
    def open(cls, directory: str | Path, snapshot_every: int = 500) -> "LexiconStore":
        return cls(Journal(directory, snapshot_every=snapshot_every))

    @classmethod
    def in_memory(cls) -> "LexiconStore":
        return cls(None)

    def close(self) -> None:
        if self.journal is not None:
            self.journal.close()

    # -- state -----------------------------------------------------------

    def _reset(self) -> None:
        self._lexemes: dict[int, Lexeme] = {}
        self._relations: dict[int, Relation] = {}
        self._sources: dict[int, Source] = {}
        self._overrides: dict[str, Override] = {}
        self._users: dict[int, User] = {}
        self._revisions: list[Revision] = []
        self._history: dict[tuple[str, str], list[int]] = {}
        self._lexeme_keys: dict[tuple[str, str, str, int], int] = {}
        self._relation_keys: dict[tuple[int, int, str], int] = {}
        self._source_names: dict[str, int] = {}
        self._usernames: dict[str, int] = {}
        self._max_ids = {"lexeme": 0, "relation": 0, "source": 0, "user": 0}

    def _load(self) -> None:
        state, transactions = self.journal.load()
        self._reset()
        if state is not None:
            for rec in state.get("lexemes", []):
                self._apply_op({"op": "put", "kind": "lexeme", "data": rec})
            for rec in state.get("sources", []):
                self._apply_op({"op": "put", "kind": "source", "data": rec})
            for rec in state.get("relations", []):
                self._apply_op({"op": "put", "kind": "relation", "data": rec})
            for rec in state.get("overrides", []):
                self._apply_op({"op": "put", "kind": "override", "data": rec})
            for rec in state.get("users", []):
                self._apply_op({"op": "put", "kind": "user", "data": rec})
            for rec in state.get("revisions", []):
                self._apply_op({"op": "rev", "data": rec})
        for tx in transactions:
            for op in tx["ops"]:
                self._apply_op(op)

    def state_dict(self) -> dict[str, Any]:
        return {
            "lexemes": [self._lexemes[i].to_record() for i in sorted(self._lexemes)],
            "relations": [self._relations[i].to_record() for i in sorted(self._relations)],
            "sources": [self._sources[i].to_record() for i in sorted(self._sources)],
            "overrides": [self._overrides[k].to_record() for k in sorted(self._overrides)],
            "users": [self._users[i].to_record() for i in sorted(self._users)],
            "revisions": [rev.to_record() for rev in self._revisions],
        }

    # -- commit machinery --------------------------------------------------

    def _apply_op(self, op: dict[str, Any]) -> None:
        action = op["op"]
        if action == "rev":
            rev = Revision.from_record(op["data"])
            self._revisions.append(rev)
            self._history.setdefault((rev.entity_kind, rev.entity_id), []).append(rev.id)
            if rev.entity_kind in ("lexeme", "relation"):
                try:
                    eid = int(rev.entity_id)
                except ValueError:
                    return
                key = rev.entity_kind
                self._max_ids[key] = max(self._max_ids[key], eid)
            return
        kind = op["kind"]
        if action == "put":
            rec = op["data"]
            if kind == "lexeme":
                lx = Lexeme.from_record(rec)
                old = self._lexemes.get(lx.id)
                if old is not None:
                    self._lexeme_keys.pop(old.key(), None)
                self._lexemes[lx.id] = lx
                self._lexeme_keys[lx.key()] = lx.id
                self._max_ids["lexeme"] = max(self._max_ids["lexeme"], lx.id)
            elif kind == "relation":
                rel = Relation.from_record(rec)
                old = self._relations.get(rel.id)
                if old is not None:
                    self._relation_keys.pop(old.key(), None)
                self._relations[rel.id] = rel
                self._relation_keys[rel.key()] = rel.id
                self._max_ids["relation"] = max(self._max_ids["relation"], rel.id)
            elif kind == "source":
                src = Source.from_record(rec)
                self._sources[src.id] = src
                self._source_names[src.name] = src.id
                self._max_ids["source"] = max(self._max_ids["source"], src.id)
            elif kind == "override":
                ov = Override.from_record(rec)
                self._overrides[ov.id] = ov
            elif kind == "user":
                user = User.from_record(rec)
                old = self._users.get(user.id)
                if old is not None:
                    self._usernames.pop(old.username, None)
                self._users[user.id] = user
                self._usernames[user.username] = user.id
                self._max_ids["user"] = max(self._max_ids["user"], user.id)
            else:
                raise ValueError(f"unknown entity kind {kind!r}")
        elif action == "del":
            eid = op["id"]
            if kind == "lexeme":
                lx = self._lexemes.pop(eid)
                self._lexeme_keys.pop(lx.key(), None)
            elif kind == "relation":
                rel = self._relations.pop(eid)
                self._relation_keys.pop(rel.key(), None)
            elif kind == "override":
                self._overrides.pop(eid)
            else:
                raise ValueError(f"cannot delete entity kind {kind!r}")
        else:
            raise ValueError(f"unknown op {action!r}")

    def _commit(self, ops: list[dict[str, Any]]) -> None:
        if not ops:
            return
        if self._batch_ops is not None:
            self._batch_ops.extend(ops)
            for op in ops:
                self._apply_op(op)
            return
        if self.journal is not None:
            self.journal.append(ops)
        for op in ops:
            self._apply_op(op)
        if self.journal is not None and self.journal.should_snapshot():
            self.journal.write_snapshot(self.state_dict())

    @contextmanager
    def batch(self):
        """Group several mutations into one journaled transaction."""
        with self.lock:
            if self._batch_ops is not None:
                yield self
                return
            self._batch_ops = []
            try:
                yield self
            except BaseException:
                self._batch_ops = None
                if self.journal is not None:
                    self._load()  # roll memory back to the journaled state
                raise
            ops = self._batch_ops
            self._batch_ops = None
            if ops and self.journal is not None:
                try:
                    self.journal.append(ops)
                except BaseException:
                    self._load()
                    raise
                if self.journal.should_snapshot():
                    self.journal.write_snapshot(self.state_dict())

    def _next_id(self, kind: str) -> int:
        return self._max_ids[kind] + 1

    def _next_version(self, kind: str, entity_id: str) -> int:
        return len(self._history.get((kind, entity_id), ())) + 1

    def _revision_op(
        self,
        kind: str,
        entity_id: str,
        editor: str,
        rev_kind: str,
        before: dict | None,
        after: dict | None,
    ) -> dict[str, Any]:
        """Build a revision op, enforcing the history chain: the new
        revision's ``before`` must equal the previous revision's ``after``."""
        history = self._history.get((kind, entity_id))
        prev_after = self._revisions[history[-1] - 1].after if history else None
        if before != prev_after:
            raise ConflictError(
                f"stale update on {kind} {entity_id}: concurrent change detected"
            )
        rev = Revision(
            id=len(self._revisions) + 1,
            entity_kind=kind,
            entity_id=entity_id,
            editor=editor,
            at=utc_now_iso(),
            kind=rev_kind,
            before=before,
            after=after,
        )
        return {"op": "rev", "data": rev.to_record()}

    # -- accessors ---------------------------------------------------------

    def lexeme(self, lexeme_id: int) -> Lexeme:
        lx = self._lexemes.get(lexeme_id)
        if lx is None:
            raise NotFoundError(f"lexeme {lexeme_id} not found")
        return lx

    def relation(self, relation_id: int) -> Relation:
        rel = self._relations.get(relation_id)
        if rel is None:
            raise NotFoundError(f"relation {relation_id} not found")
        return rel

    def source(self, source_id: int) -> Source:
        src = self._sources.get(source_id)
        if src is None:
            raise NotFoundError(f"source {source_id} not found")
        return src

    def lexemes(self) -> list[Lexeme]:
        return [self._lexemes[i] for i in sorted(self._lexemes)]

    def relations(self) -> list[Relation]:
        return [self._relations[i] for i in sorted(self._relations)]

    def sources(self) -> list[Source]:
        return [self._sources[i] for i in sorted(self._sources)]

    def users(self) -> list[User]:
        return [self._users[i] for i in sorted(self._users)]

    def find_lexeme(
        self, lemma: str, language: str, pos: str, homonym_index: int = 1
    ) -> Lexeme | None:
        lid = self._lexeme_keys.get((lemma, language, pos, homonym_index))
        return self._lexemes.get(lid) if lid is not None else None

    def find_lexemes_by_lemma_pos(self, lemma: str, pos: str, language: str) -> list[Lexeme]:
        out = [
            lx
            for lx in self._lexemes.values()
            if lx.lemma == lemma and lx.pos == pos and lx.language == language
        ]
        out.sort(key=lambda lx: (lx.homonym_index, lx.id))
        return out

    def find_relation(self, left: int, right: int, rtype: str) -> Relation | None:
        rid = self._relation_keys.get((left, right, rtype))
        return self._relations.get(rid) if rid is not None else None

    def lexemes_attested_by(self, source_id: int) -> set[int]:
        ids: set[int] = set()
        for rel in self._relations.values():
            if any(a.source_id == source_id for a in rel.sources):
                ids.add(rel.left)
                ids.add(rel.right)
        return ids

    def relations_of(self, lexeme_id: int) -> list[Relation]:
        out = [r for r in self._relations.values() if r.left == lexeme_id or r.right == lexeme_id]
        out.sort(key=lambda r: r.id)
        return out

    # -- lexeme mutations ----------------------------------------------------

    def upsert_lexeme(
        self,
        lemma: str,
        language: str,
        pos: str,
        contlex: str | None = None,
        homonym_index: int = 1,
        editor: str = "system",
        verified: bool = False,
        notes: str = "",
        external_links: list[dict[str, str]] | None = None,
        desired_id: int | None = None,
    ) -> tuple[Lexeme, bool]:
        """Create the lexeme or return the existing one with the same key.

        The lemma must already be normalized (import and API layers run
        the language's repair table first).
        """
        if not lemma or not language or not pos:
            raise ValidationError("lemma, language and pos are required")
        if homonym_index < 1:
            raise ValidationError("homonym_index must be >= 1")
        with self.lock:
            existing = self.find_lexeme(lemma, language, pos, homonym_index)
            if existing is not None:
                return existing, False
            if desired_id is not None and desired_id not in self._lexemes and desired_id >= 1:
                new_id = desired_id
            else:
                new_id = self._next_id("lexeme")
            lx = Lexeme(
                id=new_id,
                lemma=lemma,
                language=language,
                pos=pos,
                contlex=contlex,
                homonym_index=homonym_index,
                verified=verified,
                notes=notes,
                external_links=list(external_links or []),
                version=1,
            )
            rec = lx.to_record()
            ops = [
                self._revision_op("lexeme", str(new_id), editor, "create", None, snapshot_of(rec)),
                {"op": "put", "kind": "lexeme", "data": rec},
            ]
            self._commit(ops)
            return self._lexemes[new_id], True

    _LEXEME_PATCH_FIELDS = (
        "lemma",
        "language",
        "pos",
        "contlex",
        "homonym_index",
        "verified",
        "notes",
        "external_links",
    )

    def update_lexeme(
        self,
        lexeme_id: int,
        patch: dict[str, Any],
        editor: str,
        expected_version: int | None = None,
    ) -> Lexeme:
        with self.lock:
            lx = self.lexeme(lexeme_id)
            if expected_version is not None and lx.version != expected_version:
                raise ConflictError(
                    f"version mismatch: stored {lx.version}, expected {expected_version}"
                )
            bad = [k for k in patch if k not in self._LEXEME_PATCH_FIELDS]
            if bad:
                raise ValidationError(f"unknown lexeme fields: {bad}")
            rec = lx.to_record()
            new_rec = dict(rec)
            new_rec.update(patch)
            _validate_lexeme_record(new_rec)
            candidate = Lexeme.from_record(new_rec)
            if snapshot_of(candidate.to_record()) == snapshot_of(rec):
                return lx  # no-op: no revision, no version bump
            holder = self._lexeme_keys.get(candidate.key())
            if holder is not None and holder != lexeme_id:
                raise ValidationError(
                    f"lexeme key {candidate.key()} already held by lexeme {holder}"
                )
            candidate.version = self._next_version("lexeme", str(lexeme_id))
            new_full = candidate.to_record()
            ops = [
                self._revision_op(
                    "lexeme",
                    str(lexeme_id),
                    editor,
                    "update",
                    snapshot_of(rec),
                    snapshot_of(new_full),
                ),
                {"op": "put", "kind": "lexeme", "data": new_full},
            ]
            self._commit(ops)
            return self._lexemes[lexeme_id]

    def delete_lexeme(self, lexeme_id: int, editor: str) -> dict[str, Any]:
        """Delete a lexeme; referencing relations and overrides cascade,
        each with its own revision."""
        with self.lock:
            lx = self.lexeme(lexeme_id)
            ops: list[dict[str, Any]] = []
            cascaded_relations = []
            cascaded_overrides = []
            for rel in self.relations_of(lexeme_id):
                ops.append(
                    self._revision_op(
                        "relation",
                        str(rel.id),
                        editor,
                        "delete",
                        snapshot_of(rel.to_record()),
                        None,
                    )
                )
                ops.append({"op": "del", "kind": "relation", "id": rel.id})
                cascaded_relations.append(rel.id)
                self._apply_op(ops[-2])
                self._apply_op(ops[-1])
            for ov in sorted(
                (o for o in self._overrides.values() if o.lexeme_id == lexeme_id),
                key=lambda o: o.id,
            ):
                ops.append(
                    self._revision_op(
                        "override", ov.id, editor, "delete", snapshot_of(ov.to_record()), None
                    )
                )
                ops.append({"op": "del", "kind": "override", "id": ov.id})
                cascaded_overrides.append(ov.id)
                self._apply_op(ops[-2])
                self._apply_op(ops[-1])
            ops.append(
                self._revision_op(
                    "lexeme", str(lexeme_id), editor, "delete", snapshot_of(lx.to_record()), None
                )
            )
            ops.append({"op": "del", "kind": "lexeme", "id": lexeme_id})
            self._apply_op(ops[-2])
            self._apply_op(ops[-1])
            self._commit_preapplied(ops)
            return {
                "deleted": lexeme_id,
                "relations_deleted": cascaded_relations,
                "overrides_deleted": cascaded_overrides,
            }

    def _commit_preapplied(self, ops: list[dict[str, Any]]) -> None:
        """Journal ops that were already applied to memory (multi-step
        mutations whose later steps depend on earlier ones)."""
        if not ops:
            return
        if self._batch_ops is not None:
            self._batch_ops.extend(ops)
            return
        if self.journal is not None:
            try:
                self.journal.append(ops)
            except BaseException:
                self._load()
                raise
            if self.journal.should_snapshot():
                self.journal.write_snapshot(self.state_dict())

    # -- relation mutations ---------------------------------------------------

    def add_relation(
        self,
        left: int,
        right: int,
        rtype: str,
        editor: str = "system",
        attestations: list[Attestation] | None = None,
        examples: list[dict[str, str]] | None = None,
        metadata: dict[str, str] | None = None,
        verified: bool = False,
        desired_id: int | None = None,
    ) -> Relation:
        validate_relation_type(rtype)
        with self.lock:
            if left == right:
                raise ValidationError("a relation must link two distinct lexemes")
            self.lexeme(left)
            self.lexeme(right)
            if (left, right, rtype) in self._relation_keys:
                raise ConflictError(f"relation ({left},{right},{rtype}) already exists")
            for att in attestations or []:
                self.source(att.source_id)
            if desired_id is not None and desired_id not in self._relations and desired_id >= 1:
                new_id = desired_id
            else:
                new_id = self._next_id("relation")
            rel = Relation(
                id=new_id,
                left=left,
                right=right,
                type=rtype,
                verified=verified,
                sources=list(attestations or []),
                examples=list(examples or []),
                metadata=dict(metadata or {}),
                version=1,
            )
            rec = rel.to_record()
            ops = [
                self._revision_op(
                    "relation", str(new_id), editor, "create", None, snapshot_of(rec)
                ),
                {"op": "put", "kind": "relation", "data": rec},
            ]
            self._commit(ops)
            return self._relations[new_id]

    _RELATION_PATCH_FIELDS = ("left", "right", "type", "verified", "sources", "examples", "metadata")

    def update_relation(
        self,
        relation_id: int,
        patch: dict[str, Any],
        editor: str,
        expected_version: int | None = None,
    ) -> Relation:
        with self.lock:
            rel = self.relation(relation_id)
            if expected_version is not None and rel.version != expected_version:
                raise ConflictError(
                    f"version mismatch: stored {rel.version}, expected {expected_version}"
                )
            bad = [k for k in patch if k not in self._RELATION_PATCH_FIELDS]
            if bad:
                raise ValidationError(f"unknown relation fields: {bad}")
            rec = rel.to_record()
            new_rec = dict(rec)
            new_rec.update(patch)
            _validate_relation_record(new_rec)
            candidate = Relation.from_record(new_rec)
            validate_relation_type(candidate.type)
            if candidate.left == candidate.right:
                raise ValidationError("a relation must link two distinct lexemes")
            self.lexeme(candidate.left)
            self.lexeme(candidate.right)
            for att in candidate.sources:
                self.source(att.source_id)
            if snapshot_of(candidate.to_record()) == snapshot_of(rec):
                return rel
            holder = self._relation_keys.get(candidate.key())
            if holder is not None and holder != relation_id:
                raise ValidationError(
                    f"relation key {candidate.key()} already held by relation {holder}"
                )
            candidate.version = self._next_version("relation", str(relation_id))
            new_full = candidate.to_record()
            ops = [
                self._revision_op(
                    "relation",
                    str(relation_id),
                    editor,
                    "update",
                    snapshot_of(rec),
                    snapshot_of(new_full),
                ),
                {"op": "put", "kind": "relation", "data": new_full},
            ]
            self._commit(ops)
            return self._relations[relation_id]

    def delete_relation(self, relation_id: int, editor: str) -> None:
        with self.lock:
            rel = self.relation(relation_id)
            ops = [
                self._revision_op(
                    "relation",
                    str(relation_id),
                    editor,
                    "delete",
                    snapshot_of(rel.to_record()),
                    None,
                ),
                {"op": "del", "kind": "relation", "id": relation_id},
            ]
            self._commit(ops)

    def add_attestation(
        self, relation_id: int, source_id: int, locus: str | None, editor: str
    ) -> bool:
        """Attach a source to a relation; returns False if already attested."""
        with self.lock:
            rel = self.relation(relation_id)
            self.source(source_id)
            if any(a.source_id == source_id and a.locus == locus for a in rel.sources):
                return False
            sources = [a.to_record() for a in rel.sources]
            sources.append({"source_id": source_id, "locus": locus})
            self.update_relation(relation_id, {"sources": sources}, editor=editor)
            return True

    # -- sources / users --------------------------------------------------------

    def get_or_create_source(self, name: str, kind: str = "dictionary") -> Source:
        if not name:
            raise ValidationError("source name is required")
        with self.lock:
            sid = self._source_names.get(name)
            if sid is not None:
                return self._sources[sid]
            src = Source(id=self._next_id("source"), name=name, kind=kind)
            self._commit([{"op": "put", "kind": "source", "data": src.to_record()}])
            return self._sources[src.id]

    def add_user(self, username: str, display_name: str = "", role: str = "editor") -> User:
        validate_role(role)
        if not username:
            raise ValidationError("username is required")
        with self.lock:
            if username in self._usernames:
                raise ConflictError(f"username {username!r} taken")
            user = User(
                id=self._next_id("user"),
                username=username,
                display_name=display_name or username,
                role=role,
            )
            self._commit([{"op": "put", "kind": "user", "data": user.to_record()}])
            return self._users[user.id]

    def set_user_token_hash(self, username: str, token_hash: str) -> User:
        with self.lock:
            uid = self._usernames.get(username)
            if uid is None:
                raise NotFoundError(f"user {username!r} not found")
            rec = self._users[uid].to_record()
            rec["token_hash"] = token_hash
            self._commit([{"op": "put", "kind": "user", "data": rec}])
            return self._users[uid]

    def user_by_name(self, username: str) -> User | None:
        uid = self._usernames.get(username)
        return self._users.get(uid) if uid is not None else None

    # -- verification -------------------------------------------------------------

    def approve(self, kind: str, entity_id: int, editor: str) -> tuple[Any, bool]:
        """Mark a lexeme or relation verified; re-approving is a no-op."""
        with self.lock:
            if kind == "lexeme":
                entity = self.lexeme(entity_id)
            elif kind == "relation":
                entity = self.relation(entity_id)
            else:
                raise ValidationError(f"cannot approve entity kind {kind!r}")
            if entity.verified:
                return entity, False
            rec = entity.to_record()
            new_rec = dict(rec)
            new_rec["verified"] = True
            new_rec["version"] = self._next_version(kind, str(entity_id))
            ops = [
                self._revision_op(
                    kind,
                    str(entity_id),
                    editor,
                    "approve",
                    snapshot_of(rec),
                    snapshot_of(new_rec),
                ),
                {"op": "put", "kind": kind, "data": new_rec},
            ]
            self._commit(ops)
            entity = self._lexemes[entity_id] if kind == "lexeme" else self._relations[entity_id]
            return entity, True

    # -- paradigms ---------------------------------------------------------------

    def overrides_for(self, lexeme_id: int) -> dict[str, str]:
        return {
            ov.msd: ov.form for ov in self._overrides.values() if ov.lexeme_id == lexeme_id
        }

    def set_override(self, lexeme_id: int, msd: str, form: str, editor: str) -> Override:
        """Store or replace a paradigm correction; logged as kind
        paradigm-correction so transducer maintainers can review them."""
        if not msd:
            raise ValidationError("msd is required")
        if not form:
            raise ValidationError("override form must be non-empty")
        with self.lock:
            self.lexeme(lexeme_id)
            ov = Override(lexeme_id=lexeme_id, msd=msd, form=form)
            existing = self._overrides.get(ov.id)
            if existing is not None and existing.form == form:
                return existing
            before = snapshot_of(existing.to_record()) if existing is not None else None
            ops = [
                self._revision_op(
                    "override",
                    ov.id,
                    editor,
                    "paradigm-correction",
                    before,
                    snapshot_of(ov.to_record()),
                ),
                {"op": "put", "kind": "override", "data": ov.to_record()},
            ]
            self._commit(ops)
            return self._overrides[ov.id]

    def paradigm(
        self,
        lexeme_id: int,
        spec: MiniParadigmSpec,
        generator: Transducer,
        full: bool = False,
    ) -> list[ParadigmForm]:
        lx = self.lexeme(lexeme_id)
        if spec.pos != lx.pos:
            raise ValidationError(f"paradigm spec is for {spec.pos}, lexeme is {lx.pos}")
        msds = spec.full_msds if full else spec.msds
        return generate_paradigm(lx.lemma, msds, generator, self.overrides_for(lexeme_id))

    def link_derivations(
        self,
        language: str,
        analyzer: Transducer,
        editor: str = "system",
        tag_prefix: str = "+Der",
        pos_tags: Iterable[str] = DEFAULT_POS_TAGS,
    ) -> list[Relation]:
        """Create derivation relations from analyzer readings.

        For each lexeme whose analysis carries a derivation tag and whose
        base lemma/POS exists in the same language, link derived -> base.
        Idempotent: existing relations are left alone.
        """
        pos_tags = tuple(pos_tags)
        created: list[Relation] = []
        with self.lock:
            candidates = [lx for lx in self.lexemes() if lx.language == language]
            for lx in candidates:
                analyses = lookup(analyzer, lx.lemma)
                for result in sorted(analyses):
                    parsed = parse_derivation_analysis(result.output, tag_prefix, pos_tags)
                    if parsed is None:
                        continue
                    base_lemma, base_pos = parsed
                    bases = [
                        b
                        for b in self.find_lexemes_by_lemma_pos(base_lemma, base_pos, language)
                        if b.id != lx.id
                    ]
                    if not bases:
                        continue
                    base = bases[0]
                    if (lx.id, base.id, "derivation") in self._relation_keys:
                        continue
                    created.append(
                        self.add_relation(lx.id, base.id, "derivation", editor=editor)
                    )
        return created

    # -- revisions ----------------------------------------------------------------

    def revision(self, revision_id: int) -> Revision:
        if not 1 <= revision_id <= len(self._revisions):
            raise NotFoundError(f"revision {revision_id} not found")
        return self._revisions[revision_id - 1]

    def revisions(self, editor: str | None = None, since: str | None = None) -> list[Revision]:
        out = self._revisions
        if editor is not None:
            out = [r for r in out if r.editor == editor]
        if since is not None:
            out = [r for r in out if r.at >= since]
        return list(out)

    def history(self, kind: str, entity_id: int | str) -> list[Revision]:
        ids = self._history.get((kind, str(entity_id)), [])
        return [self._revisions[i - 1] for i in ids]

    def _entity_record(self, kind: str, entity_id: str) -> dict[str, Any] | None:
        if kind == "lexeme":
            lx = self._lexemes.get(int(entity_id))
            return lx.to_record() if lx else None
        if kind == "relation":
            rel = self._relations.get(int(entity_id))
            return rel.to_record() if rel else None
        if kind == "override":
            ov = self._overrides.get(entity_id)
            return ov.to_record() if ov else None
        raise ValidationError(f"unknown entity kind {kind!r}")

    def revert(self, revision_id: int, editor: str) -> Revision:
        """Restore the entity to the reverted revision's ``before`` state.

        Only that entity changes (reverting a creation cascades deletes of
        referencing relations/overrides, each with its own revision);
        history is append-only, so the revert itself is a new revision.
        """
        with self.lock:
            rev = self.revision(revision_id)
            kind, entity_id = rev.entity_kind, rev.entity_id
            current = self._entity_record(kind, entity_id)
            current_snapshot = snapshot_of(current)
            target = rev.before

            if current_snapshot == target:
                raise ConflictError("entity already equals the reverted state")

            if target is None:
                # reverting a creation deletes the entity
                if current is None:
                    raise ConflictError("entity already deleted")
                if kind == "lexeme":
                    self.delete_lexeme_as_revert(int(entity_id), editor)
                else:
                    ops = [
                        self._revision_op(
                            kind, entity_id, editor, "revert", current_snapshot, None
                        ),
                        {
                            "op": "del",
                            "kind": kind,
                            "id": int(entity_id) if kind == "relation" else entity_id,
                        },
                    ]
                    self._commit(ops)
                return self._revisions[-1]

            # restoring content (possibly recreating a deleted entity)
            self._check_revert_target(kind, entity_id, target)
            new_rec = dict(target)
            if kind in ("lexeme", "relation"):
                new_rec["version"] = self._next_version(kind, entity_id)
            ops = [
                self._revision_op(kind, entity_id, editor, "revert", current_snapshot, target),
                {"op": "put", "kind": kind, "data": new_rec},
            ]
            self._commit(ops)
            return self._revisions[-1]

    def delete_lexeme_as_revert(self, lexeme_id: int, editor: str) -> None:
        lx = self.lexeme(lexeme_id)
        ops: list[dict[str, Any]] = []
        for rel in self.relations_of(lexeme_id):
            ops.append(
                self._revision_op(
                    "relation", str(rel.id), editor, "delete", snapshot_of(rel.to_record()), None
                )
            )
            ops.append({"op": "del", "kind": "relation", "id": rel.id})
            self._apply_op(ops[-2])
            self._apply_op(ops[-1])
        for ov in sorted(
            (o for o in self._overrides.values() if o.lexeme_id == lexeme_id),
            key=lambda o: o.id,
        ):
            ops.append(
                self._revision_op(
                    "override", ov.id, editor, "delete", snapshot_of(ov.to_record()), None
                )
            )
            ops.append({"op": "del", "kind": "override", "id": ov.id})
            self._apply_op(ops[-2])
            self._apply_op(ops[-1])
        ops.append(
            self._revision_op(
                "lexeme", str(lexeme_id), editor, "revert", snapshot_of(lx.to_record()), None
            )
        )
        ops.append({"op": "del", "kind": "lexeme", "id": lexeme_id})
        self._apply_op(ops[-2])
        self._apply_op(ops[-1])
        self._commit_preapplied(ops)

    def _check_revert_target(self, kind: str, entity_id: str, target: dict[str, Any]) -> None:
        if kind == "lexeme":
            key = (
                target["lemma"],
                target["language"],
                target["pos"],
                target.get("homonym_index", 1),
            )
            holder = self._lexeme_keys.get(key)
            if holder is not None and str(holder) != entity_id:
                raise ConflictError(
                    f"cannot revert: lexeme key {key} is now held by lexeme {holder}"
                )
        elif kind == "relation":
            key = (target["left"], target["right"], target["type"])
            holder = self._relation_keys.get(key)
            if holder is not None and str(holder) != entity_id:
                raise ConflictError(
                    f"cannot revert: relation key {key} is now held by relation {holder}"
                )
            if target["left"] not in self._lexemes or target["right"] not in self._lexemes:
                raise ConflictError("cannot revert: relation endpoints no longer exist")
        elif kind == "override":
            if target["lexeme_id"] not in self._lexemes:
                raise ConflictError("cannot revert: the override's lexeme no longer exists")
