"""Bulk import of legacy dictionaries from CSV and XML.

Both paths repair character encoding through the language's normalization
table before anything touches the store, merge into existing content by
lexeme key, and turn duplicate relations into additional source
attestations instead of errors. Data problems are isolated per row or per
element and collected in the report; only structural problems (missing
required columns, unparseable XML) abort the whole import.
"""

from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import IO, Any

from .errors import ParseError, ValidationError
from .model import RELATION_TYPES, Attestation
from .normalize import NormalizationTable, normalize_counting
from .store import LexiconStore

REQUIRED_CSV_COLUMNS = ("lemma", "language", "pos")
OPTIONAL_CSV_COLUMNS = (
    "contlex",
    "translation_lemma",
    "translation_language",
    "translation_pos",
    "notes",
)


@dataclass
class ImportReport:
    lexemes_created: int = 0
    lexemes_matched: int = 0
    relations_created: int = 0
    relations_skipped_duplicate: int = 0
    normalization_changes: int = 0
    errors: list[tuple[str, str]] = field(default_factory=list)

    def to_record(self) -> dict[str, Any]:
        return {
            "lexemes_created": self.lexemes_created,
            "lexemes_matched": self.lexemes_matched,
            "relations_created": self.relations_created,
            "relations_skipped_duplicate": self.relations_skipped_duplicate,
            "normalization_changes": self.normalization_changes,
            "errors": [{"locus": locus, "message": message} for locus, message in self.errors],
        }


def _as_text(stream: str | bytes | IO) -> str:
    if isinstance(stream, str):
        return stream
    if isinstance(stream, bytes):
        return stream.decode("utf-8")
    data = stream.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _upsert_normalized(
    store: LexiconStore,
    report: ImportReport,
    table: NormalizationTable,
    lemma: str,
    language: str,
    pos: str,
    contlex: str | None = None,
    homonym_index: int = 1,
    editor: str = "import",
    **extra,
):
    lemma, changed = normalize_counting(table, lemma)
    report.normalization_changes += changed
    lexeme, created = store.upsert_lexeme(
        lemma, language, pos, contlex=contlex, homonym_index=homonym_index, editor=editor, **extra
    )
    if created:
        report.lexemes_created += 1
    else:
        report.lexemes_matched += 1
    return lexeme


def _attest(store: LexiconStore, report: ImportReport, relation_id: int, source_id: int,
            locus: str | None, editor: str) -> None:
    store.add_attestation(relation_id, source_id, locus, editor=editor)


def import_csv(
    stream: str | bytes | IO,
    store: LexiconStore,
    source_name: str,
    table: NormalizationTable,
    editor: str = "import",
) -> ImportReport:
    """Import a header-carrying CSV of lexemes and optional translations.

    Required columns: lemma, language, pos. Rows with the translation
    triple create (or re-attest) a translation relation to the target
    lexeme. Malformed rows are skipped and reported, the rest proceed.
    """
    report = ImportReport()
    text = _as_text(stream)
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    missing = [c for c in REQUIRED_CSV_COLUMNS if c not in header]
    if missing:
        raise ValidationError(f"missing required CSV columns: {', '.join(missing)}")

    source = store.get_or_create_source(source_name)
    for row_no, row in enumerate(reader, start=2):  # line 1 is the header
        locus = f"row {row_no}"
        try:
            with store.batch():
                lemma = (row.get("lemma") or "").strip()
                language = (row.get("language") or "").strip()
                pos = (row.get("pos") or "").strip()
                if not lemma or not language or not pos:
                    report.errors.append((locus, "lemma, language and pos are required"))
                    continue
                contlex = (row.get("contlex") or "").strip() or None
                notes_raw = (row.get("notes") or "").strip()
                notes, changed = normalize_counting(table, notes_raw)
                report.normalization_changes += changed
                lexeme = _upsert_normalized(
                    store, report, table, lemma, language, pos,
                    contlex=contlex, editor=editor, notes=notes,
                )

                t_lemma = (row.get("translation_lemma") or "").strip()
                t_lang = (row.get("translation_language") or "").strip()
                t_pos = (row.get("translation_pos") or "").strip()
                if not t_lemma and not t_lang and not t_pos:
                    continue
                if not (t_lemma and t_lang and t_pos):
                    report.errors.append(
                        (locus, "translation columns must be given together")
                    )
                    continue
                target = _upsert_normalized(
                    store, report, table, t_lemma, t_lang, t_pos, editor=editor
                )
                existing = store.find_relation(lexeme.id, target.id, "translation")
                if existing is None:
                    rel = store.add_relation(
                        lexeme.id,
                        target.id,
                        "translation",
                        editor=editor,
                        attestations=[Attestation(source_id=source.id)],
                    )
                    report.relations_created += 1
                else:
                    report.relations_skipped_duplicate += 1
                    _attest(store, report, existing.id, source.id, None, editor)
        except ValidationError as exc:
            report.errors.append((locus, exc.message))
    return report


def _parse_bool(value: str | None, default: bool = False) -> bool:
    if value is None:
        return default
    if value in ("true", "1"):
        return True
    if value in ("false", "0"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def import_xml(
    stream: str | bytes | IO,
    store: LexiconStore,
    source_name: str,
    table: NormalizationTable,
    editor: str = "import",
) -> ImportReport:
    """Import the dictionary XML interchange format (the exporter's schema).

    Element ids are preserved when free in the target store, so exporting
    and re-importing into an empty store is the identity up to nothing at
    all; colliding ids are remapped. Unknown relation types and dangling
    references are element-level errors.
    """
    report = ImportReport()
    text = _as_text(stream)
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise ParseError(f"malformed XML: {exc.msg.split(':')[0]}", line=line) from None
    if root.tag != "dictionary":
        raise ParseError(f"root element must be <dictionary>, got <{root.tag}>")

    store.get_or_create_source(source_name)  # record the import's provenance
    id_map: dict[int, int] = {}
    lexeme_no = 0
    relation_no = 0
    for element in root:
        if element.tag == "lexeme":
            lexeme_no += 1
            locus = f"lexeme[{lexeme_no}]"
            try:
                with store.batch():
                    self_id = element.get("id")
                    lang = element.get("lang")
                    pos = element.get("pos")
                    lemma_el = element.find("lemma")
                    if lang is None or pos is None or lemma_el is None or not (lemma_el.text or ""):
                        raise ParseError(
                            "lexeme needs lang and pos attributes and a <lemma> child",
                            locus=locus,
                        )
                    homonym = int(element.get("homonym", "1"))
                    verified = _parse_bool(element.get("verified"))
                    note_el = element.find("note")
                    notes_raw = note_el.text or "" if note_el is not None else ""
                    notes, changed = normalize_counting(table, notes_raw)
                    report.normalization_changes += changed
                    links = []
                    for link in element.findall("link"):
                        title, url = link.get("title"), link.get("url")
                        if not title or not url:
                            raise ParseError("link needs title and url", locus=locus)
                        links.append({"title": title, "url": url})
                    lexeme = _upsert_normalized(
                        store, report, table,
                        lemma_el.text, lang, pos,
                        contlex=element.get("contlex"),
                        homonym_index=homonym,
                        editor=editor,
                        verified=verified,
                        notes=notes,
                        external_links=links,
                        desired_id=int(self_id) if self_id else None,
                    )
                    if self_id:
                        id_map[int(self_id)] = lexeme.id
            except ParseError as exc:
                raise ParseError(exc.message, locus=locus) from None
            except (ValidationError, ValueError) as exc:
                report.errors.append((locus, str(exc)))
        elif element.tag == "relation":
            relation_no += 1
            locus = f"relation[{relation_no}]"
            try:
                with store.batch():
                    rtype = element.get("type") or ""
                    if rtype not in RELATION_TYPES:
                        report.errors.append((locus, f"unknown relation type {rtype!r}"))
                        continue
                    left_raw = int(element.get("left", "0"))
                    right_raw = int(element.get("right", "0"))
                    left = id_map.get(left_raw, left_raw)
                    right = id_map.get(right_raw, right_raw)
                    verified = _parse_bool(element.get("verified"))
                    attestations = []
                    for src_el in element.findall("source"):
                        name = src_el.get("name")
                        if not name:
                            raise ParseError("source needs a name", locus=locus)
                        src = store.get_or_create_source(name)
                        attestations.append(
                            Attestation(source_id=src.id, locus=src_el.get("locus"))
                        )
                    examples = [
                        {"text": ex.text or "", "language": ex.get("lang", "")}
                        for ex in element.findall("example")
                    ]
                    metadata = {
                        meta.get("key", ""): meta.text or ""
                        for meta in element.findall("meta")
                    }
                    self_id = element.get("id")
                    existing = store.find_relation(left, right, rtype)
                    if existing is not None:
                        report.relations_skipped_duplicate += 1
                        # only the file's own attestations merge in; the
                        # round-trip contract forbids fabricating content
                        for att in attestations:
                            _attest(store, report, existing.id, att.source_id, att.locus, editor)
                        continue
                    store.add_relation(
                        left,
                        right,
                        rtype,
                        editor=editor,
                        attestations=attestations,
                        examples=examples,
                        metadata=metadata,
                        verified=verified,
                        desired_id=int(self_id) if self_id else None,
                    )
                    report.relations_created += 1
            except ParseError as exc:
                raise ParseError(exc.message, locus=locus) from None
            except (ValidationError, ValueError) as exc:
                report.errors.append((locus, str(exc)))
            except Exception as exc:  # NotFoundError for dangling refs
                report.errors.append((locus, str(exc)))
        else:
            raise ParseError(f"unexpected element <{element.tag}>", locus=element.tag)
    return report
