from __future__ import annotations

import json
from pathlib import Path

import pytest

from verdd.errors import ValidationError
from verdd.config import load_config

REPO = Path(__file__).parent.parent


def test_shipped_config_loads():
    config = load_config(REPO / "configs" / "verdd.json")
    assert config.default_language == "sms"
    sms = config.language("sms")
    assert sms.generator is not None and sms.analyzer is not None
    assert sms.table.mappings[ord("'")] == "ʹ"
    assert "+N+Sg+Nom" in sms.paradigms["N"].msds
    assert set(sms.paradigms["N"].msds) <= set(sms.paradigms["N"].full_msds)
    assert config.language("fin").generator is None


def test_default_language_fallback(tmp_path):
    doc = {"storage_dir": "d", "languages": {"zz": {}, "aa": {}}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    config = load_config(path)
    assert config.default_language == "aa"
    with pytest.raises(ValidationError):
        config.language("missing")


def test_relative_paths_resolve_against_config(tmp_path):
    (tmp_path / "machines").mkdir()
    (tmp_path / "machines" / "g.att").write_text("0\t1\ta\ta\n1\n")
    doc = {
        "storage_dir": "data",
        "languages": {"xx": {"generator": "machines/g.att"}},
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    config = load_config(path)
    assert config.storage_dir == tmp_path / "data"
    assert config.language("xx").generator is not None


def test_broken_transducer_fails_at_load(tmp_path):
    (tmp_path / "bad.att").write_text("0\t1\ta\n")  # 3 fields
    doc = {"storage_dir": "d", "languages": {"xx": {"generator": "bad.att"}}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(Exception):
        load_config(path)


def test_missing_config_file():
    with pytest.raises(ValidationError):
        load_config("/nonexistent/config.json")
