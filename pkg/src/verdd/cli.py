"""Operations CLI: serve the API, run imports/exports, link derivations,
manage users and tokens. The config path comes from --config or the
VERDD_CONFIG environment variable."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import auth
from .config import CONFIG_ENV_VAR, Config, load_config
from .errors import VerddError
from .exporter import export_csv, export_latex, export_xml
from .importer import import_csv, import_xml
from .search import Query, execute_unpaginated
from .store import LexiconStore


def _open_store(config: Config) -> LexiconStore:
    return LexiconStore.open(config.storage_dir)


@click.group()
@click.option(
    "--config",
    "config_path",
    envvar=CONFIG_ENV_VAR,
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help=f"Path to the JSON config (or set {CONFIG_ENV_VAR}).",
)
@click.pass_context
def main(ctx, config_path):
    ctx.obj = load_config(config_path)


@main.command()
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.pass_obj
def serve(config: Config, host, port):
    """Run the HTTP API (and the frontend, if built)."""
    import uvicorn

    from .server import create_app

    app = create_app(config)
    uvicorn.run(app, host=host or config.host, port=port or config.port)


@main.command("import-csv")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--source", required=True, help="Source name attested on imported relations.")
@click.option("--language", default=None, help="Language whose repair table to apply.")
@click.option("--editor", default="cli")
@click.pass_obj
def import_csv_cmd(config: Config, file, source, language, editor):
    store = _open_store(config)
    try:
        report = import_csv(
            Path(file).read_text(encoding="utf-8"),
            store,
            source,
            config.table_for(language),
            editor=editor,
        )
    finally:
        store.close()
    _print_report(report)


@main.command("import-xml")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--source", required=True)
@click.option("--language", default=None)
@click.option("--editor", default="cli")
@click.pass_obj
def import_xml_cmd(config: Config, file, source, language, editor):
    store = _open_store(config)
    try:
        report = import_xml(
            Path(file).read_text(encoding="utf-8"),
            store,
            source,
            config.table_for(language),
            editor=editor,
        )
    finally:
        store.close()
    _print_report(report)


def _print_report(report):
    rec = report.to_record()
    for key in (
        "lexemes_created",
        "lexemes_matched",
        "relations_created",
        "relations_skipped_duplicate",
        "normalization_changes",
    ):
        click.echo(f"{key}: {rec[key]}")
    for err in rec["errors"]:
        click.echo(f"error at {err['locus']}: {err['message']}", err=True)


@main.command("export-latex")
@click.argument("out", type=click.Path(dir_okay=False))
@click.option("--types", default="translation", help="Comma-separated relation types.")
@click.pass_obj
def export_latex_cmd(config: Config, out, types):
    store = _open_store(config)
    try:
        text = export_latex(store, tuple(types.split(",")))
    finally:
        store.close()
    Path(out).write_text(text, encoding="utf-8")
    click.echo(f"wrote {out}")


@main.command("export-xml")
@click.argument("out", type=click.Path(dir_okay=False))
@click.pass_obj
def export_xml_cmd(config: Config, out):
    store = _open_store(config)
    try:
        text = export_xml(store)
    finally:
        store.close()
    Path(out).write_text(text, encoding="utf-8")
    click.echo(f"wrote {out}")


@main.command("export-csv")
@click.argument("out", type=click.Path(dir_okay=False))
@click.option("--lemma", default="")
@click.option("--mode", default="exact", type=click.Choice(["exact", "substring", "regex"]))
@click.option("--language", default=None)
@click.option("--pos", default=None)
@click.option("--verified", default=None, type=bool)
@click.option("--sort", default="lemma", type=click.Choice(["lemma", "assonance", "consonance", "ending"]))
@click.option("--desc", is_flag=True, default=False)
@click.pass_obj
def export_csv_cmd(config: Config, out, lemma, mode, language, pos, verified, sort, desc):
    store = _open_store(config)
    try:
        q = Query(
            lemma_pattern=lemma,
            lemma_mode=mode,
            language=language,
            pos=pos,
            verified=verified,
            sort=sort,
            descending=desc,
        )
        ids = execute_unpaginated(q, store, config.classes_for(language))
        text = export_csv(store, ids)
    finally:
        store.close()
    Path(out).write_text(text, encoding="utf-8")
    click.echo(f"wrote {out} ({len(ids)} rows)")


@main.command("link-derivations")
@click.option("--language", default=None, help="Only this language (default: all with analyzers).")
@click.option("--editor", default="cli")
@click.pass_obj
def link_derivations_cmd(config: Config, language, editor):
    store = _open_store(config)
    try:
        total = 0
        codes = [language] if language else sorted(config.languages)
        for code in codes:
            lang = config.language(code)
            if lang.analyzer is None:
                continue
            created = store.link_derivations(
                code,
                lang.analyzer,
                editor=editor,
                tag_prefix=lang.derivation_tag_prefix,
                pos_tags=lang.pos_tags,
            )
            click.echo(f"{code}: {len(created)} derivation relations created")
            total += len(created)
        click.echo(f"total: {total}")
    finally:
        store.close()


@main.group()
def user():
    """Manage editor accounts and tokens."""


@user.command("add")
@click.argument("name")
@click.option("--role", default="editor", type=click.Choice(["editor", "admin"]))
@click.option("--display-name", default="")
@click.pass_obj
def user_add(config: Config, name, role, display_name):
    store = _open_store(config)
    try:
        record = store.add_user(name, display_name=display_name, role=role)
        click.echo(f"created user {record.username} ({record.role})")
    finally:
        store.close()


@user.command("token")
@click.argument("name")
@click.pass_obj
def user_token(config: Config, name):
    store = _open_store(config)
    try:
        token = auth.issue_token(store, name)
    finally:
        store.close()
    click.echo(token)


def run() -> None:
    try:
        main(auto_envvar_prefix="VERDD")
    except VerddError as exc:
        click.echo(f"error: {exc.message}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    run()
