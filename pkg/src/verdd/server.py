"""HTTP API over the store: resource-oriented JSON endpoints, bearer-token
authentication on every mutating route, and static serving of the editor
frontend plus its locale catalogs.

Errors use one body shape everywhere: {"code", "message", "locus"}.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Any, Optional

from fastapi import Depends, FastAPI, Request, UploadFile
from fastapi.responses import HTMLResponse, JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles

from . import auth
from .config import Config
from .errors import (
    AuthError,
    ConflictError,
    NotFoundError,
    ParseError,
    QueryError,
    ValidationError,
    VerddError,
)
from .exporter import (
    export_checklist,
    export_csv,
    export_latex,
    export_xml,
    ingest_checklist,
)
from .importer import import_csv, import_xml
from .model import RELATION_TYPES, Attestation, Relation, User
from .normalize import normalize
from .search import (
    LEMMA_MODES,
    SORT_KEYS,
    Page,
    Query,
    RelationQuery,
    execute,
    execute_relations,
    execute_relations_unpaginated,
    execute_unpaginated,
    neighbors,
)
from .store import LexiconStore

_STATUS = {
    "validation": 400,
    "bad_query": 400,
    "parse": 400,
    "tokenize": 400,
    "unauthorized": 401,
    "not_found": 404,
    "conflict": 409,
}


def _relation_view(store: LexiconStore, rel: Relation) -> dict[str, Any]:
    rec = rel.to_record()
    left = store.lexeme(rel.left)
    right = store.lexeme(rel.right)
    rec["left_lemma"], rec["left_pos"] = left.lemma, left.pos
    rec["right_lemma"], rec["right_pos"] = right.lemma, right.pos
    rec["sources"] = [
        {**att.to_record(), "source_name": store.source(att.source_id).name}
        for att in rel.sources
    ]
    return rec


def _page_payload(page: Page, items: list[dict[str, Any]]) -> dict[str, Any]:
    return {"items": items, "total": page.total, "page": page.page, "page_size": page.page_size}


def create_app(config: Config, store: LexiconStore | None = None) -> FastAPI:
    app = FastAPI(title="verdd", docs_url="/api/docs", openapi_url="/api/openapi.json")
    if store is None:
        store = LexiconStore.open(config.storage_dir)
    app.state.store = store
    app.state.config = config

    @app.exception_handler(VerddError)
    async def verdd_error_handler(_request: Request, exc: VerddError):
        status = _STATUS.get(exc.code, 500)
        return JSONResponse(
            status_code=status,
            content={"code": exc.code, "message": exc.message, "locus": exc.locus},
        )

    def current_user(request: Request) -> User:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise AuthError("missing bearer token")
        user = auth.authenticate(store, header[7:].strip())
        if user is None:
            raise AuthError("invalid or revoked token")
        return user

    def admin_user(user: User = Depends(current_user)) -> User:
        if user.role != "admin":
            raise AuthError("admin role required")
        return user

    # -- query parsing -----------------------------------------------------

    def _parse_bool(value: Optional[str], name: str) -> Optional[bool]:
        if value is None or value == "":
            return None
        if value in ("true", "1"):
            return True
        if value in ("false", "0"):
            return False
        raise QueryError(f"{name} must be true or false")

    def _paging(request: Request) -> tuple[int, int]:
        try:
            page = int(request.query_params.get("page", "1"))
            page_size = int(request.query_params.get("page_size", "50"))
        except ValueError:
            raise QueryError("page and page_size must be integers") from None
        if page_size > config.page_size_cap:
            raise QueryError(f"page_size exceeds the configured cap {config.page_size_cap}")
        return page, page_size

    def lexeme_query(request: Request) -> Query:
        params = request.query_params
        mode = params.get("mode", "exact")
        if mode not in LEMMA_MODES:
            raise QueryError(f"unknown match mode {mode!r}")
        sort = params.get("sort", "lemma")
        if sort not in SORT_KEYS:
            raise QueryError(f"unknown sort key {sort!r}")
        source = params.get("source")
        page, page_size = _paging(request)
        return Query(
            lemma_pattern=params.get("lemma", ""),
            lemma_mode=mode,
            language=params.get("language") or None,
            pos=params.get("pos") or None,
            source=int(source) if source else None,
            verified=_parse_bool(params.get("verified"), "verified"),
            sort=sort,
            descending=_parse_bool(params.get("desc"), "desc") or False,
            page=page,
            page_size=page_size,
        )

    def relation_query(request: Request) -> RelationQuery:
        params = request.query_params
        rtype = params.get("type") or None
        if rtype is not None and rtype not in RELATION_TYPES:
            raise QueryError(f"unknown relation type {rtype!r}")
        page, page_size = _paging(request)
        return RelationQuery(
            left=params.get("left", ""),
            right=params.get("right", ""),
            mode=params.get("mode", "exact"),
            type=rtype,
            verified=_parse_bool(params.get("verified"), "verified"),
            pos=params.get("pos") or None,
            language=params.get("language") or None,
            sort=params.get("sort", "lemma"),
            descending=_parse_bool(params.get("desc"), "desc") or False,
            page=page,
            page_size=page_size,
        )

    def _classes(language: Optional[str]):
        return config.classes_for(language or config.default_language)

    # -- lexemes ----------------------------------------------------------

    @app.get("/api/lexemes")
    def search_lexemes(request: Request):
        q = lexeme_query(request)
        with store.lock:
            page = execute(q, store, _classes(q.language))
            items = [store.lexeme(i).to_record() for i in page.items]
        return _page_payload(page, items)

    @app.post("/api/lexemes", status_code=201)
    async def create_lexeme(request: Request, user: User = Depends(current_user)):
        body = await request.json()
        language = body.get("language", "")
        lemma = normalize(config.table_for(language), body.get("lemma", ""))
        lexeme, created = store.upsert_lexeme(
            lemma,
            language,
            body.get("pos", ""),
            contlex=body.get("contlex"),
            homonym_index=int(body.get("homonym_index", 1)),
            editor=user.username,
            notes=body.get("notes", ""),
            external_links=body.get("external_links") or [],
        )
        payload = {"lexeme": lexeme.to_record(), "created": created}
        return JSONResponse(status_code=201 if created else 200, content=payload)

    @app.get("/api/lexemes/{lexeme_id}")
    def get_lexeme(lexeme_id: int):
        with store.lock:
            lx = store.lexeme(lexeme_id)
            rels = [_relation_view(store, r) for r in store.relations_of(lexeme_id)]
        return {"lexeme": lx.to_record(), "relations": rels}

    @app.patch("/api/lexemes/{lexeme_id}")
    async def patch_lexeme(lexeme_id: int, request: Request, user: User = Depends(current_user)):
        body = await request.json()
        patch = dict(body.get("patch", {}))
        if "expected_version" not in body:
            raise ValidationError("expected_version is required")
        if "lemma" in patch:
            language = patch.get("language") or store.lexeme(lexeme_id).language
            patch["lemma"] = normalize(config.table_for(language), patch["lemma"])
        lx = store.update_lexeme(
            lexeme_id, patch, editor=user.username, expected_version=int(body["expected_version"])
        )
        return {"lexeme": lx.to_record()}

    @app.delete("/api/lexemes/{lexeme_id}")
    def delete_lexeme(lexeme_id: int, user: User = Depends(current_user)):
        return store.delete_lexeme(lexeme_id, editor=user.username)

    @app.get("/api/lexemes/{lexeme_id}/paradigm")
    def lexeme_paradigm(lexeme_id: int, full: bool = False):
        with store.lock:
            lx = store.lexeme(lexeme_id)
            try:
                lang = config.language(lx.language)
            except ValidationError:
                lang = None
            overrides = store.overrides_for(lexeme_id)
            if lang is None or lang.generator is None or lx.pos not in lang.paradigms:
                forms = [
                    {"msd": msd, "form": form, "origin": "override", "weight": 0.0}
                    for msd, form in sorted(overrides.items())
                ]
                return {"forms": forms, "generated": False}
            spec = lang.paradigms[lx.pos]
            forms = store.paradigm(lexeme_id, spec, lang.generator, full=full)
        return {"forms": [f.to_record() for f in forms], "generated": True}

    @app.put("/api/lexemes/{lexeme_id}/paradigm/{msd}")
    async def put_override(
        lexeme_id: int, msd: str, request: Request, user: User = Depends(current_user)
    ):
        body = await request.json()
        override = store.set_override(lexeme_id, msd, body.get("form", ""), editor=user.username)
        return {"override": override.to_record()}

    @app.get("/api/lexemes/{lexeme_id}/neighbors")
    def lexeme_neighbors(lexeme_id: int, request: Request):
        q = lexeme_query(request)
        with store.lock:
            prev_id, next_id = neighbors(q, store, lexeme_id, _classes(q.language))
        return {"prev": prev_id, "next": next_id}

    # -- relations ----------------------------------------------------------

    @app.get("/api/relations")
    def search_relations(request: Request):
        rq = relation_query(request)
        with store.lock:
            page = execute_relations(rq, store, _classes(rq.language))
            items = [_relation_view(store, store.relation(i)) for i in page.items]
        return _page_payload(page, items)

    @app.post("/api/relations", status_code=201)
    async def create_relation(request: Request, user: User = Depends(current_user)):
        body = await request.json()
        attestations = []
        for raw in body.get("sources", []):
            if "source_id" in raw:
                source_id = int(raw["source_id"])
                store.source(source_id)
            else:
                source_id = store.get_or_create_source(raw.get("source_name", "")).id
            attestations.append(Attestation(source_id=source_id, locus=raw.get("locus")))
        rel = store.add_relation(
            int(body.get("left", 0)),
            int(body.get("right", 0)),
            body.get("type", ""),
            editor=user.username,
            attestations=attestations,
            examples=body.get("examples") or [],
            metadata=body.get("metadata") or {},
        )
        return {"relation": _relation_view(store, rel)}

    @app.get("/api/relations/{relation_id}")
    def get_relation(relation_id: int):
        with store.lock:
            return {"relation": _relation_view(store, store.relation(relation_id))}

    @app.patch("/api/relations/{relation_id}")
    async def patch_relation(
        relation_id: int, request: Request, user: User = Depends(current_user)
    ):
        body = await request.json()
        if "expected_version" not in body:
            raise ValidationError("expected_version is required")
        rel = store.update_relation(
            relation_id,
            dict(body.get("patch", {})),
            editor=user.username,
            expected_version=int(body["expected_version"]),
        )
        return {"relation": _relation_view(store, rel)}

    @app.delete("/api/relations/{relation_id}")
    def delete_relation(relation_id: int, user: User = Depends(current_user)):
        store.delete_relation(relation_id, editor=user.username)
        return {"deleted": relation_id}

    # -- verification / history ----------------------------------------------

    @app.post("/api/approve")
    async def bulk_approve(request: Request, user: User = Depends(current_user)):
        refs = await request.json()
        if not isinstance(refs, list):
            raise ValidationError("body must be a list of {kind, id}")
        approved = already = 0
        failed = []
        for ref in refs:
            try:
                _, newly = store.approve(
                    ref.get("kind", ""), int(ref.get("id", 0)), editor=user.username
                )
                if newly:
                    approved += 1
                else:
                    already += 1
            except VerddError as exc:
                failed.append({"kind": ref.get("kind"), "id": ref.get("id"), "error": exc.message})
        return {"approved": approved, "already": already, "failed": failed}

    @app.get("/api/history/{kind}/{entity_id}")
    def entity_history(kind: str, entity_id: str):
        with store.lock:
            revisions = store.history(kind, entity_id)
        return {"revisions": [r.to_record() for r in revisions]}

    @app.post("/api/revert/{revision_id}")
    def revert(revision_id: int, user: User = Depends(current_user)):
        revision = store.revert(revision_id, editor=user.username)
        return {"revision": revision.to_record()}

    @app.get("/api/admin/revisions")
    def admin_revisions(
        editor: Optional[str] = None,
        since: Optional[str] = None,
        _admin: User = Depends(admin_user),
    ):
        with store.lock:
            revisions = store.revisions(editor=editor, since=since)
        return {"revisions": [r.to_record() for r in revisions]}

    # -- import / export ---------------------------------------------------------

    @app.post("/api/import/csv")
    async def import_csv_endpoint(
        file: UploadFile,
        source_name: str,
        language: Optional[str] = None,
        user: User = Depends(current_user),
    ):
        table = config.table_for(language)
        report = import_csv(await file.read(), store, source_name, table, editor=user.username)
        return report.to_record()

    @app.post("/api/import/xml")
    async def import_xml_endpoint(
        file: UploadFile,
        source_name: str,
        language: Optional[str] = None,
        user: User = Depends(current_user),
    ):
        table = config.table_for(language)
        report = import_xml(await file.read(), store, source_name, table, editor=user.username)
        return report.to_record()

    @app.post("/api/import/checklist")
    async def import_checklist_endpoint(file: UploadFile, user: User = Depends(current_user)):
        report = ingest_checklist(store, await file.read(), editor=user.username)
        return report.to_record()

    @app.get("/api/export/latex")
    def export_latex_endpoint(types: Optional[str] = None):
        selected = tuple(types.split(",")) if types else ("translation",)
        for rtype in selected:
            if rtype not in RELATION_TYPES:
                raise QueryError(f"unknown relation type {rtype!r}")
        with store.lock:
            text = export_latex(store, selected)
        return PlainTextResponse(
            text,
            media_type="application/x-tex",
            headers={"Content-Disposition": 'attachment; filename="entries.tex"'},
        )

    @app.get("/api/export/xml")
    def export_xml_endpoint():
        with store.lock:
            text = export_xml(store)
        return Response(
            text,
            media_type="application/xml",
            headers={"Content-Disposition": 'attachment; filename="dictionary.xml"'},
        )

    @app.get("/api/export/csv")
    def export_csv_endpoint(request: Request):
        q = lexeme_query(request)
        with store.lock:
            ids = execute_unpaginated(q, store, _classes(q.language))
            text = export_csv(store, ids)
        return PlainTextResponse(
            text,
            media_type="text/csv",
            headers={"Content-Disposition": 'attachment; filename="lexemes.csv"'},
        )

    @app.get("/api/export/checklist")
    def export_checklist_endpoint(request: Request):
        rq = relation_query(request)
        with store.lock:
            ids = execute_relations_unpaginated(rq, store, _classes(rq.language))
            text = export_checklist(store, ids)
        return PlainTextResponse(
            text,
            media_type="text/csv",
            headers={"Content-Disposition": 'attachment; filename="checklist.csv"'},
        )

    # -- metadata for the frontend -------------------------------------------------

    @app.get("/api/meta")
    def meta():
        languages = {
            code: {
                "has_generator": lang.generator is not None,
                "has_analyzer": lang.analyzer is not None,
                "paradigm_pos": sorted(lang.paradigms),
            }
            for code, lang in config.languages.items()
        }
        return {
            "languages": languages,
            "default_language": config.default_language,
            "relation_types": list(RELATION_TYPES),
            "sort_keys": list(SORT_KEYS),
            "page_size_cap": config.page_size_cap,
        }

    @app.get("/api/sources")
    def list_sources():
        with store.lock:
            return {"sources": [s.to_record() for s in store.sources()]}

    @app.get("/api/whoami")
    def whoami(user: User = Depends(current_user)):
        return {"username": user.username, "display_name": user.display_name, "role": user.role}

    # -- i18n and static frontend ------------------------------------------------------

    @app.get("/i18n/{locale}.json")
    def locale_catalog(locale: str):
        if not locale.isalpha() or len(locale) > 8:
            raise NotFoundError(f"no catalog for locale {locale!r}")
        try:
            data = resources.files("verdd").joinpath(f"i18n/{locale}.json").read_text("utf-8")
        except (FileNotFoundError, OSError):
            raise NotFoundError(f"no catalog for locale {locale!r}") from None
        return Response(data, media_type="application/json")

    if config.static_dir is not None and config.static_dir.exists():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="frontend")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return (
                "<!doctype html><title>verdd</title>"
                "<h1>Dictionary service is running</h1>"
                "<p>No frontend build found; the API lives under <code>/api</code>.</p>"
            )

    return app


def load_catalog(locale: str) -> dict[str, str]:
    """Read a bundled locale catalog (used by tests and the CLI)."""
    text = resources.files("verdd").joinpath(f"i18n/{locale}.json").read_text("utf-8")
    return json.loads(text)
