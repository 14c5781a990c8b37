"""Configuration: one JSON file describing storage, server and languages.

All language-specific data lives here (normalization table, vowel and
consonant classes, paradigm msd lists, transducer paths, derivation tag
settings), so supporting another language is configuration, not code.
Referenced transducer files are parsed at load time; a config pointing at
a broken machine fails at startup, not mid-edit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import ValidationError
from .fst import Transducer, parse_att
from .model import MiniParadigmSpec
from .normalize import NormalizationTable
from .search import CharClasses
from .store import DEFAULT_POS_TAGS

CONFIG_ENV_VAR = "VERDD_CONFIG"


@dataclass
class LanguageConfig:
    code: str
    table: NormalizationTable = field(default_factory=NormalizationTable)
    classes: CharClasses = field(default_factory=CharClasses)
    paradigms: dict[str, MiniParadigmSpec] = field(default_factory=dict)
    generator: Optional[Transducer] = None
    analyzer: Optional[Transducer] = None
    derivation_tag_prefix: str = "+Der"
    pos_tags: tuple[str, ...] = DEFAULT_POS_TAGS


@dataclass
class Config:
    storage_dir: Path
    host: str = "127.0.0.1"
    port: int = 8000
    page_size_cap: int = 500
    default_language: Optional[str] = None
    static_dir: Optional[Path] = None
    languages: dict[str, LanguageConfig] = field(default_factory=dict)

    def language(self, code: Optional[str]) -> LanguageConfig:
        if code is None:
            code = self.default_language
        if code is None or code not in self.languages:
            known = ", ".join(sorted(self.languages)) or "none"
            raise ValidationError(f"unknown language {code!r} (configured: {known})")
        return self.languages[code]

    def table_for(self, code: Optional[str]) -> NormalizationTable:
        try:
            return self.language(code).table
        except ValidationError:
            return NormalizationTable()

    def classes_for(self, code: Optional[str]) -> CharClasses:
        try:
            return self.language(code).classes
        except ValidationError:
            return CharClasses()


def _load_transducer(path_value: str, base: Path, role: str, code: str) -> Transducer:
    path = (base / path_value).resolve() if not Path(path_value).is_absolute() else Path(path_value)
    if not path.exists():
        raise ValidationError(f"{role} transducer for {code} not found: {path}")
    return parse_att(path.read_text(encoding="utf-8"))


def load_config(path: str | Path) -> Config:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    base = path.parent

    storage_dir = Path(raw.get("storage_dir", "data"))
    if not storage_dir.is_absolute():
        storage_dir = base / storage_dir
    server = raw.get("server", {})
    static_dir = raw.get("static_dir")
    if static_dir is not None:
        static_dir = Path(static_dir)
        if not static_dir.is_absolute():
            static_dir = base / static_dir

    config = Config(
        storage_dir=storage_dir,
        host=server.get("host", "127.0.0.1"),
        port=int(server.get("port", 8000)),
        page_size_cap=int(raw.get("page_size_cap", 500)),
        default_language=raw.get("default_language"),
        static_dir=static_dir,
    )

    for code, lang_raw in raw.get("languages", {}).items():
        table = NormalizationTable.from_strings(lang_raw.get("normalization", {}), language=code)
        classes = CharClasses.from_strings(
            lang_raw.get("vowels", ""), lang_raw.get("consonants", "")
        )
        paradigms = {}
        for pos, spec_raw in lang_raw.get("paradigms", {}).items():
            full = list(spec_raw.get("full", []))
            mini = list(spec_raw.get("mini", full))
            paradigms[pos] = MiniParadigmSpec(pos=pos, msds=mini, full_msds=full)
        generator = analyzer = None
        if lang_raw.get("generator"):
            generator = _load_transducer(lang_raw["generator"], base, "generator", code)
        if lang_raw.get("analyzer"):
            analyzer = _load_transducer(lang_raw["analyzer"], base, "analyzer", code)
        config.languages[code] = LanguageConfig(
            code=code,
            table=table,
            classes=classes,
            paradigms=paradigms,
            generator=generator,
            analyzer=analyzer,
            derivation_tag_prefix=lang_raw.get("derivation_tag_prefix", "+Der"),
            pos_tags=tuple(lang_raw.get("pos_tags", DEFAULT_POS_TAGS)),
        )

    if config.default_language is None and config.languages:
        config.default_language = sorted(config.languages)[0]
    return config
