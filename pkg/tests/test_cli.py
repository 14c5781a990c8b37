from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from verdd import auth
from verdd.cli import main
from verdd.store import LexiconStore

REPO = Path(__file__).parent.parent


@pytest.fixture
def env(tmp_path):
    config_doc = {
        "storage_dir": str(tmp_path / "data"),
        "default_language": "en",
        "languages": {
            "en": {
                "vowels": "aeiou",
                "consonants": "bcdfghjklmnpqrstvwxyz",
                "generator": str(REPO / "configs/transducers/toy-generator.att"),
                "analyzer": str(REPO / "configs/transducers/toy-analyzer.att"),
                "paradigms": {"N": {"mini": ["+N+Sg"], "full": ["+N+Sg", "+N+Pl"]}},
            }
        },
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config_doc), encoding="utf-8")
    return {"config": str(config_path), "tmp": tmp_path, "runner": CliRunner()}


def invoke(env, *args):
    return env["runner"].invoke(main, ["--config", env["config"], *args])


def test_import_and_export_csv(env):
    src = env["tmp"] / "in.csv"
    src.write_text(
        "lemma,language,pos,translation_lemma,translation_language,translation_pos\n"
        "sing,en,V,laulaa,fi,V\n",
        encoding="utf-8",
    )
    result = invoke(env, "import-csv", str(src), "--source", "songbook")
    assert result.exit_code == 0, result.output
    assert "lexemes_created: 2" in result.output
    assert "relations_created: 1" in result.output

    out = env["tmp"] / "out.csv"
    result = invoke(env, "export-csv", str(out))
    assert result.exit_code == 0
    assert len(out.read_text().splitlines()) == 3


def test_link_derivations_and_xml_export(env):
    csv_file = env["tmp"] / "words.csv"
    csv_file.write_text(
        "lemma,language,pos\nsing,en,V\nsinger,en,N\n", encoding="utf-8"
    )
    invoke(env, "import-csv", str(csv_file), "--source", "s")
    result = invoke(env, "link-derivations")
    assert result.exit_code == 0, result.output
    assert "en: 1 derivation relations created" in result.output
    # second run is a no-op
    result = invoke(env, "link-derivations")
    assert "en: 0 derivation relations created" in result.output

    out = env["tmp"] / "dict.xml"
    result = invoke(env, "export-xml", str(out))
    assert result.exit_code == 0
    assert 'type="derivation"' in out.read_text()


def test_export_latex_cli(env):
    store = LexiconStore.open(env["tmp"] / "data")
    a, _ = store.upsert_lexeme("sing", "en", "V", editor="t")
    b, _ = store.upsert_lexeme("laulaa", "fi", "V", editor="t")
    rel = store.add_relation(a.id, b.id, "translation", editor="t")
    for kind, eid in [("lexeme", a.id), ("lexeme", b.id), ("relation", rel.id)]:
        store.approve(kind, eid, editor="t")
    store.close()

    out = env["tmp"] / "entries.tex"
    result = invoke(env, "export-latex", str(out))
    assert result.exit_code == 0
    assert "\\entry{sing}{V}{\\trans{laulaa}{V}}" in out.read_text()


def test_user_management_and_token(env):
    result = invoke(env, "user", "add", "maria", "--role", "admin")
    assert result.exit_code == 0
    result = invoke(env, "user", "token", "maria")
    assert result.exit_code == 0
    token = result.output.strip()
    store = LexiconStore.open(env["tmp"] / "data")
    user = auth.authenticate(store, token)
    store.close()
    assert user is not None and user.username == "maria"


def test_duplicate_user_fails_cleanly(env):
    assert invoke(env, "user", "add", "maria").exit_code == 0
    result = invoke(env, "user", "add", "maria")
    assert result.exit_code != 0


def test_config_env_var(env, monkeypatch):
    monkeypatch.setenv("VERDD_CONFIG", env["config"])
    result = env["runner"].invoke(main, ["user", "add", "pekka"])
    assert result.exit_code == 0, result.output


def test_bad_transducer_path_fails_at_startup(env, tmp_path):
    config_doc = {
        "storage_dir": str(tmp_path / "d2"),
        "languages": {"en": {"generator": "missing.att"}},
    }
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(config_doc), encoding="utf-8")
    result = env["runner"].invoke(main, ["--config", str(bad), "user", "add", "x"])
    assert result.exit_code != 0
