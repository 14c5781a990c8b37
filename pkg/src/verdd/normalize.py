"""Character repair for legacy orthography.

Minority-language text accumulates look-alike code points: apostrophe
variants standing in for modifier letters, precomposed vs decomposed
diacritics, characters typed on whatever keyboard was at hand. A
NormalizationTable maps each wrong code point to its correct replacement;
normalization applies the table per code point and then canonically
composes (NFC).
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ValidationError


@dataclass(frozen=True)
class NormalizationTable:
    """Single-code-point to replacement-string mapping for one language.

    The table must be closed under application: mapping any replacement
    string through the table changes nothing. That closure is what makes
    normalize() idempotent.
    """

    mappings: Mapping[int, str] = field(default_factory=dict)
    language: str = ""

    def __post_init__(self):
        for cp, target in self.mappings.items():
            if not isinstance(cp, int):
                raise ValidationError(f"table keys must be code points, got {cp!r}")
            if target == "":
                raise ValidationError(f"empty replacement for U+{cp:04X}")
            for ch in target:
                mapped = self.mappings.get(ord(ch), ch)
                if mapped != ch:
                    raise ValidationError(
                        f"table not closed: replacement {target!r} for U+{cp:04X} "
                        f"is itself rewritten"
                    )

    @classmethod
    def from_strings(cls, pairs: Mapping[str, str], language: str = "") -> "NormalizationTable":
        mappings: dict[int, str] = {}
        for src, target in pairs.items():
            if len(src) != 1:
                raise ValidationError(f"mapping source must be one code point: {src!r}")
            mappings[ord(src)] = target
        return cls(mappings=mappings, language=language)

    def as_strings(self) -> dict[str, str]:
        return {chr(cp): target for cp, target in self.mappings.items()}


EMPTY_TABLE = NormalizationTable()


def normalize_counting(table: NormalizationTable, s: str) -> tuple[str, int]:
    """normalize() plus the number of code points the table rewrote."""
    mappings = table.mappings
    changed = 0
    if mappings:
        parts = []
        for ch in s:
            target = mappings.get(ord(ch))
            if target is None or target == ch:
                parts.append(ch)
            else:
                parts.append(target)
                changed += 1
        mapped = "".join(parts)
    else:
        mapped = s
    return unicodedata.normalize("NFC", mapped), changed


def normalize(table: NormalizationTable, s: str) -> str:
    """Map each code point through the table, then canonically compose."""
    return normalize_counting(table, s)[0]


# Default repair table for Skolt Sami: apostrophe look-alikes that show up
# in legacy material for the suprasegmental softener, all mapped to the
# modifier letter prime.
SKOLT_MAPPINGS = {
    "'": "ʹ",  # APOSTROPHE
    "’": "ʹ",  # RIGHT SINGLE QUOTATION MARK
    "´": "ʹ",  # ACUTE ACCENT
    "ʼ": "ʹ",  # MODIFIER LETTER APOSTROPHE
}

SKOLT_TABLE = NormalizationTable.from_strings(SKOLT_MAPPINGS, language="sms")

# Code points used to write Skolt Sami; the test corpus draws from this
# inventory plus the mapping domain above.
SKOLT_INVENTORY = (
    "aâäåbcčʒǯdđefgǧǥhijkǩlmnŋoõprsšštuvzž"
    "AÂÄÅBCČƷǮDĐEFGǦǤHIJKǨLMNŊOÕPRSŠTUVZŽ"
    "ʹ- "
)
