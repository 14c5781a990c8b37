"""Advanced search over lexemes and relations.

Filtering is a conjunction of the present query fields; ordering uses
phonological sort keys (assonance = the lemma's vowels in order,
consonance = its consonants, ending = the reversed lemma) with a fixed
tie-break, so result sequences are total and reproducible. Pagination
slices the ordered sequence; prev/next navigation evaluates the same
query without pagination.

The regex dialect is the stdlib engine with backreferences rejected up
front, keeping worst-case latency sane on 10k+ entry lexica; patterns are
matched with search semantics (anchor with ^ and $ for full matches).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import QueryError
from .store import LexiconStore

LEMMA_MODES = ("exact", "substring", "regex")
SORT_KEYS = ("lemma", "assonance", "consonance", "ending")

MAX_PAGE_SIZE = 500

_BACKREFERENCE = re.compile(r"\\[1-9]|\(\?P=|\\g<")


@dataclass(frozen=True)
class CharClasses:
    vowels: frozenset[str] = frozenset()
    consonants: frozenset[str] = frozenset()

    def __post_init__(self):
        overlap = self.vowels & self.consonants
        if overlap:
            raise QueryError(f"characters classed as both vowel and consonant: {sorted(overlap)}")

    @classmethod
    def from_strings(cls, vowels: str, consonants: str) -> "CharClasses":
        return cls(frozenset(vowels), frozenset(consonants))


EMPTY_CLASSES = CharClasses()


@dataclass
class Query:
    lemma_pattern: str = ""
    lemma_mode: str = "exact"
    language: Optional[str] = None
    pos: Optional[str] = None
    source: Optional[int] = None
    verified: Optional[bool] = None
    sort: str = "lemma"
    descending: bool = False
    page: int = 1
    page_size: int = 50


@dataclass
class RelationQuery:
    """Relation search: left/right lemma patterns share one match mode;
    pos/language/sort apply to the left-hand lexeme."""

    left: str = ""
    right: str = ""
    mode: str = "exact"
    type: Optional[str] = None
    verified: Optional[bool] = None
    pos: Optional[str] = None
    language: Optional[str] = None
    sort: str = "lemma"
    descending: bool = False
    page: int = 1
    page_size: int = 50


@dataclass
class Page:
    items: list[int]
    total: int
    page: int
    page_size: int


def compile_pattern(pattern: str, mode: str) -> Optional[re.Pattern]:
    if mode not in LEMMA_MODES:
        raise QueryError(f"unknown match mode {mode!r}")
    if mode != "regex" or not pattern:
        return None
    if _BACKREFERENCE.search(pattern):
        raise QueryError("backreferences are not supported in search patterns")
    try:
        return re.compile(pattern)
    except re.error as exc:
        raise QueryError(f"invalid regular expression: {exc}") from None


def _validate_paging(page: int, page_size: int, cap: int) -> None:
    if page < 1:
        raise QueryError("page must be >= 1")
    if not 1 <= page_size <= cap:
        raise QueryError(f"page_size must be between 1 and {cap}")


def sort_key(kind: str, lemma: str, classes: CharClasses) -> str:
    """Phonological grouping key for one lemma."""
    if kind == "assonance":
        return "".join(ch for ch in lemma if ch in classes.vowels)
    if kind == "consonance":
        return "".join(ch for ch in lemma if ch in classes.consonants)
    if kind == "ending":
        return lemma[::-1]
    if kind == "lemma":
        return lemma
    raise QueryError(f"unknown sort key {kind!r}")


def _matches(lemma: str, pattern: str, mode: str, rx: Optional[re.Pattern]) -> bool:
    if not pattern:
        return True
    if mode == "exact":
        return lemma == pattern
    if mode == "substring":
        return pattern in lemma
    return rx.search(lemma) is not None


def _order_lexemes(rows, sort: str, descending: bool, classes: CharClasses) -> list:
    if sort not in SORT_KEYS:
        raise QueryError(f"unknown sort key {sort!r}")
    rows.sort(key=lambda lx: (lx.lemma, lx.homonym_index, lx.id))
    rows.sort(key=lambda lx: sort_key(sort, lx.lemma, classes), reverse=descending)
    return rows


def execute_unpaginated(q: Query, store: LexiconStore, classes: CharClasses) -> list[int]:
    rx = compile_pattern(q.lemma_pattern, q.lemma_mode)
    attested: Optional[set[int]] = None
    if q.source is not None:
        attested = store.lexemes_attested_by(q.source)
    rows = []
    for lx in store.lexemes():
        if not _matches(lx.lemma, q.lemma_pattern, q.lemma_mode, rx):
            continue
        if q.language is not None and lx.language != q.language:
            continue
        if q.pos is not None and lx.pos != q.pos:
            continue
        if q.verified is not None and lx.verified != q.verified:
            continue
        if attested is not None and lx.id not in attested:
            continue
        rows.append(lx)
    return [lx.id for lx in _order_lexemes(rows, q.sort, q.descending, classes)]


def execute(q: Query, store: LexiconStore, classes: CharClasses = EMPTY_CLASSES) -> Page:
    _validate_paging(q.page, q.page_size, MAX_PAGE_SIZE)
    ids = execute_unpaginated(q, store, classes)
    start = (q.page - 1) * q.page_size
    return Page(items=ids[start : start + q.page_size], total=len(ids), page=q.page, page_size=q.page_size)


def neighbors(
    q: Query, store: LexiconStore, current_lexeme_id: int, classes: CharClasses = EMPTY_CLASSES
) -> tuple[Optional[int], Optional[int]]:
    """Previous/next lexeme ids in the full (unpaginated) query ordering.

    A lexeme that no longer matches its own search yields (None, None):
    navigation degrades gracefully when an editor edits an entry out of
    the active filter.
    """
    ids = execute_unpaginated(q, store, classes)
    try:
        index = ids.index(current_lexeme_id)
    except ValueError:
        return None, None
    prev_id = ids[index - 1] if index > 0 else None
    next_id = ids[index + 1] if index + 1 < len(ids) else None
    return prev_id, next_id


def execute_relations_unpaginated(
    rq: RelationQuery, store: LexiconStore, classes: CharClasses
) -> list[int]:
    left_rx = compile_pattern(rq.left, rq.mode)
    right_rx = compile_pattern(rq.right, rq.mode)
    rows = []
    for rel in store.relations():
        left = store.lexeme(rel.left)
        right = store.lexeme(rel.right)
        if not _matches(left.lemma, rq.left, rq.mode, left_rx):
            continue
        if not _matches(right.lemma, rq.right, rq.mode, right_rx):
            continue
        if rq.type is not None and rel.type != rq.type:
            continue
        if rq.verified is not None and rel.verified != rq.verified:
            continue
        if rq.pos is not None and left.pos != rq.pos:
            continue
        if rq.language is not None and left.language != rq.language:
            continue
        rows.append((rel, left))
    if rq.sort not in SORT_KEYS:
        raise QueryError(f"unknown sort key {rq.sort!r}")
    rows.sort(key=lambda pair: (pair[1].lemma, pair[1].homonym_index, pair[0].id))
    rows.sort(key=lambda pair: sort_key(rq.sort, pair[1].lemma, classes), reverse=rq.descending)
    return [rel.id for rel, _ in rows]


def execute_relations(
    rq: RelationQuery, store: LexiconStore, classes: CharClasses = EMPTY_CLASSES
) -> Page:
    _validate_paging(rq.page, rq.page_size, MAX_PAGE_SIZE)
    ids = execute_relations_unpaginated(rq, store, classes)
    start = (rq.page - 1) * rq.page_size
    return Page(
        items=ids[start : start + rq.page_size], total=len(ids), page=rq.page, page_size=rq.page_size
    )
