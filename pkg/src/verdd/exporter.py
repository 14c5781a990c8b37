"""Export surfaces: print dictionary (LaTeX), machine formats (CSV, XML),
and the pencil-and-paper checklist with its bulk-approval ingest.

Every export is a pure function of the store snapshot it reads:
deterministic byte output, no timestamps, stable ordering. The XML
schema here is bit-exactly the one import_xml reads back.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ParseError
from .search import RelationQuery
from .store import LexiconStore

LATEX_HEADER = "% Generated dictionary entries; include from template/dictionary.tex via \\input."

_LATEX_ESCAPES = {
    "&": r"\&",
    "%": r"\%",
    "#": r"\#",
    "_": r"\_",
    "{": r"\{",
    "}": r"\}",
    "\\": r"\textbackslash{}",
    "^": r"\^{}",
    "~": r"\~{}",
}

TICK_VALUES = frozenset({"x", "1", "yes", "✓"})

CHECKLIST_COLUMNS = ["relation_id", "left_lemma", "left_pos", "right_lemma", "right_pos", "tick"]
LEXEME_CSV_COLUMNS = ["id", "lemma", "language", "pos", "contlex", "homonym", "verified"]


def escape_latex(s: str) -> str:
    return "".join(_LATEX_ESCAPES.get(ch, ch) for ch in s)


def export_latex(store: LexiconStore, relation_types: Iterable[str] = ("translation",)) -> str:
    """Entries for the print dictionary.

    Included: verified relations of the requested types whose two endpoint
    lexemes are themselves verified (a verified relation to an unverified
    headword is not print-ready). Output is nothing but \\dictsection and
    \\entry commands; all layout lives in the template.
    """
    wanted = set(relation_types)
    groups: dict[int, list] = {}
    for rel in store.relations():
        if rel.type not in wanted or not rel.verified:
            continue
        left = store.lexeme(rel.left)
        right = store.lexeme(rel.right)
        if not left.verified or not right.verified:
            continue
        groups.setdefault(left.id, []).append(right)

    lines = [LATEX_HEADER]
    section = None
    ordered = sorted(
        groups.items(),
        key=lambda item: (
            store.lexeme(item[0]).lemma,
            store.lexeme(item[0]).homonym_index,
            item[0],
        ),
    )
    for left_id, targets in ordered:
        left = store.lexeme(left_id)
        letter = left.lemma[0].upper()
        if letter != section:
            section = letter
            lines.append(f"\\dictsection{{{escape_latex(letter)}}}")
        targets = sorted(targets, key=lambda lx: (lx.lemma, lx.pos, lx.id))
        rendered = "; ".join(
            f"\\trans{{{escape_latex(t.lemma)}}}{{{escape_latex(t.pos)}}}" for t in targets
        )
        lines.append(f"\\entry{{{escape_latex(left.lemma)}}}{{{escape_latex(left.pos)}}}{{{rendered}}}")
    return "\n".join(lines) + "\n"


def export_csv(store: LexiconStore, lexeme_ids: Iterable[int]) -> str:
    """Lexeme rows in the given (query) order."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(LEXEME_CSV_COLUMNS)
    for lid in lexeme_ids:
        lx = store.lexeme(lid)
        writer.writerow(
            [
                lx.id,
                lx.lemma,
                lx.language,
                lx.pos,
                lx.contlex or "",
                lx.homonym_index,
                "true" if lx.verified else "false",
            ]
        )
    return out.getvalue()


# -- XML ---------------------------------------------------------------------


def _xml_escape_text(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _xml_escape_attr(s: str) -> str:
    return _xml_escape_text(s).replace('"', "&quot;")


def _attrs(pairs: list[tuple[str, str]]) -> str:
    return "".join(f' {name}="{_xml_escape_attr(value)}"' for name, value in pairs)


def export_xml(store: LexiconStore) -> str:
    """The full store (verified or not) in the interchange schema.

    Deterministic: entities ordered by id, metadata by key. Round-trips
    through import_xml into an equal store; into an empty store it even
    keeps the ids, making a second export byte-identical.
    """
    lexemes = store.lexemes()
    relations = store.relations()
    if not lexemes and not relations:
        return "<dictionary/>\n"

    lines = ["<dictionary>"]
    for lx in lexemes:
        attrs = [("id", str(lx.id)), ("lang", lx.language), ("pos", lx.pos)]
        if lx.contlex is not None:
            attrs.append(("contlex", lx.contlex))
        attrs.append(("homonym", str(lx.homonym_index)))
        attrs.append(("verified", "true" if lx.verified else "false"))
        lines.append(f"  <lexeme{_attrs(attrs)}>")
        lines.append(f"    <lemma>{_xml_escape_text(lx.lemma)}</lemma>")
        if lx.notes:
            lines.append(f"    <note>{_xml_escape_text(lx.notes)}</note>")
        for link in lx.external_links:
            lines.append(f"    <link{_attrs([('title', link['title']), ('url', link['url'])])}/>")
        lines.append("  </lexeme>")
    for rel in relations:
        attrs = [
            ("id", str(rel.id)),
            ("left", str(rel.left)),
            ("right", str(rel.right)),
            ("type", rel.type),
            ("verified", "true" if rel.verified else "false"),
        ]
        lines.append(f"  <relation{_attrs(attrs)}>")
        for att in rel.sources:
            src = store.source(att.source_id)
            pairs = [("name", src.name)]
            if att.locus is not None:
                pairs.append(("locus", att.locus))
            lines.append(f"    <source{_attrs(pairs)}/>")
        for example in rel.examples:
            lines.append(
                f"    <example{_attrs([('lang', example.get('language', ''))])}>"
                f"{_xml_escape_text(example.get('text', ''))}</example>"
            )
        for key in sorted(rel.metadata):
            lines.append(
                f"    <meta{_attrs([('key', key)])}>{_xml_escape_text(rel.metadata[key])}</meta>"
            )
        lines.append("  </relation>")
    lines.append("</dictionary>")
    return "\n".join(lines) + "\n"


# -- checklist -----------------------------------------------------------------


def export_checklist(store: LexiconStore, relation_ids: Iterable[int]) -> str:
    """Paired words with an empty tick column, for printing.

    The caller orders ids with the relation search, so batches can follow
    part of speech or assonance/consonance grouping.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CHECKLIST_COLUMNS)
    for rid in relation_ids:
        rel = store.relation(rid)
        left = store.lexeme(rel.left)
        right = store.lexeme(rel.right)
        writer.writerow([rel.id, left.lemma, left.pos, right.lemma, right.pos, ""])
    return out.getvalue()


@dataclass
class ChecklistReport:
    approved: int = 0
    unknown_ids: list[str] = field(default_factory=list)
    ambiguous: list[str] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "approved": self.approved,
            "unknown_ids": list(self.unknown_ids),
            "ambiguous": list(self.ambiguous),
        }


def ingest_checklist(store: LexiconStore, text: str | bytes, editor: str) -> ChecklistReport:
    """Apply a filled checklist: ticks in {x, 1, yes, ✓} approve the
    relation, empty ticks do nothing, anything else is flagged ambiguous."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    missing = [c for c in ("relation_id", "tick") if c not in header]
    if missing:
        raise ParseError(f"checklist is missing columns: {', '.join(missing)}", line=1)

    report = ChecklistReport()
    for line_no, row in enumerate(reader, start=2):
        raw_id = row.get("relation_id")
        tick = row.get("tick")
        if raw_id is None or tick is None:
            raise ParseError("short row in checklist", line=line_no)
        tick = tick.strip().lower()
        if tick == "":
            continue
        if tick not in TICK_VALUES:
            report.ambiguous.append(raw_id)
            continue
        try:
            relation_id = int(raw_id)
            store.relation(relation_id)
        except Exception:
            report.unknown_ids.append(raw_id)
            continue
        store.approve("relation", relation_id, editor=editor)
        report.approved += 1
    return report


def checklist_query_ids(store: LexiconStore, rq: RelationQuery, classes) -> list[int]:
    from .search import execute_relations_unpaginated

    return execute_relations_unpaginated(rq, store, classes)
