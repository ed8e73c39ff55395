"""HTTP JSON API exposing the engine to the console and to scripts.

Every engine operation maps onto one endpoint under ``/v1/``. Identity is
a trusted ``X-User-Id`` header (the deployment sits behind agency SSO).
Engine errors surface as structured bodies ``{"code": ..., "message": ...}``
with a stable HTTP mapping: 400 schema violations, 403 ownership, 404
unknown ids, 409 stale drafts / version mismatches / unresolved conflicts.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import diffmerge, ingest, report as report_mod
from .errors import BindFailure, CasegraphError, SchemaViolation, UnknownReport, UnknownState
from .model import CredibilityLevel
from .store import CaseStore, canonical_json


@dataclass
class ServiceConfig:
    listen_address: str = "127.0.0.1:8800"
    data_root: Optional[str] = None
    case_id: str = "case-1"
    auth_mode: str = "header-identity"

    @classmethod
    def from_file(cls, path) -> "ServiceConfig":
        data = json.loads(Path(path).read_text())
        return cls(
            listen_address=data.get("listenAddress", "127.0.0.1:8800"),
            data_root=data.get("dataRootPath"),
            case_id=data.get("caseId", "case-1"),
            auth_mode=data.get("authMode", "header-identity"),
        )

    def resolved_root(self) -> Optional[Path]:
        root = os.environ.get("CASEGRAPH_DATA_ROOT") or self.data_root
        return Path(root) if root else None


def _user(request: Request) -> str:
    user = request.headers.get("X-User-Id")
    if not user:
        raise SchemaViolation("missing X-User-Id header")
    return user


def _require(body: dict, *keys):
    for key in keys:
        if key not in body:
            raise SchemaViolation(f"missing field {key!r}")


def _credibility(value) -> CredibilityLevel:
    if isinstance(value, str):
        try:
            return CredibilityLevel[value.upper()]
        except KeyError:
            raise SchemaViolation(f"unknown credibility {value!r}")
    try:
        return CredibilityLevel(int(value))
    except ValueError:
        raise SchemaViolation(f"unknown credibility {value!r}")


def create_app(store: CaseStore) -> FastAPI:
    app = FastAPI(title="casegraph", version="0.1.0")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    app.state.store = store
    app.state.drafts = {}          # draftId -> (docId, StateDraft)
    app.state.draft_counter = itertools.count(1)
    app.state.reports = {}
    app.state.commit_keys = {}     # (docId, idempotencyKey) -> stateId
    _load_reports(store, app.state.reports)

    @app.exception_handler(CasegraphError)
    async def engine_error(_request, exc: CasegraphError):
        return JSONResponse(status_code=exc.http_status,
                            content={"code": exc.code, "message": str(exc)})

    v1 = "/v1"

    @app.get(v1 + "/health")
    def health():
        return {
            "status": "ok",
            "documents": len(store.documents),
            "datasets": len(store.datasets),
            "warnings": [str(w) for w in store.warnings],
        }

    # --- datasets / updates / jobs ---

    @app.get(v1 + "/datasets")
    def list_datasets():
        return [
            {"id": ds.id, "name": ds.name, "version": ds.version,
             "objects": len(ds.objects), "relationships": len(ds.relationships),
             "loadedAt": ds.loaded_at}
            for ds in sorted(store.datasets.values(), key=lambda d: d.id)
        ]

    @app.post(v1 + "/datasets", status_code=201)
    def post_dataset(request: Request, body: dict = Body(...)):
        _user(request)
        return {"datasetId": ingest.load_dataset(store, body)}

    @app.post(v1 + "/updates")
    def post_update(request: Request, body: dict = Body(...)):
        _user(request)
        return ingest.apply_update(store, body).to_dict()

    @app.get(v1 + "/jobs")
    def jobs():
        return [j.to_dict() for j in store.list_jobs()]

    # --- documents and branches ---

    @app.get(v1 + "/documents")
    def list_documents():
        return [
            {"id": d.id, "name": d.name, "caseId": d.case_id,
             "datasetIds": d.dataset_ids, "rootStateId": d.root_state_id,
             "states": len(d.states), "branches": len(d.branches),
             "createdBy": d.created_by, "createdAt": d.created_at}
            for d in sorted(store.documents.values(), key=lambda d: d.id)
        ]

    @app.post(v1 + "/documents", status_code=201)
    def post_document(request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "name", "datasetIds")
        doc = store.create_document(body["name"], body["datasetIds"], user)
        return doc.summary()

    @app.get(v1 + "/documents/{doc_id}")
    def get_document(doc_id: str):
        return store.document(doc_id).summary()

    @app.post(v1 + "/documents/{doc_id}/branches", status_code=201)
    def post_branch(doc_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "name", "fromStateId")
        doc = store.document(doc_id)
        bid = doc.create_branch(body["name"], body.get("hypothesis", ""),
                                body["fromStateId"], user)
        return {"branchId": bid}

    # --- drafts ---

    def _draft(draft_id: str):
        entry = app.state.drafts.get(draft_id)
        if entry is None:
            raise UnknownState(f"unknown draft {draft_id}")
        return entry

    @app.post(v1 + "/documents/{doc_id}/drafts", status_code=201)
    def open_draft(doc_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "branchId")
        doc = store.document(doc_id)
        draft = doc.open_draft(body["branchId"], user)
        draft_id = f"draft-{next(app.state.draft_counter)}"
        app.state.drafts[draft_id] = (doc_id, draft)
        return {"draftId": draft_id, "baseStateId": draft.base_state_id,
                "branchId": draft.branch_id, "payload": draft.payload.to_dict()}

    @app.post(v1 + "/drafts/{draft_id}/objects", status_code=201)
    def draft_object(draft_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _, draft = _draft(draft_id)
        _require(body, "kind")
        oid = draft.create_object(body["kind"], body.get("attributes"),
                                  _credibility(body.get("credibility", 3)), user)
        return {"objectId": oid}

    @app.post(v1 + "/drafts/{draft_id}/relationships", status_code=201)
    def draft_relationship(draft_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _, draft = _draft(draft_id)
        _require(body, "sourceId", "targetId", "kind")
        rid = draft.create_relationship(
            body["sourceId"], body["targetId"], body["kind"],
            _credibility(body.get("credibility", 3)), user,
            body.get("directed", True))
        return {"relationshipId": rid}

    @app.post(v1 + "/drafts/{draft_id}/attributes")
    def draft_attribute(draft_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _, draft = _draft(draft_id)
        _require(body, "objectId", "key", "value", "credibility")
        draft.set_attribute(body["objectId"], body["key"], body["value"],
                            _credibility(body["credibility"]), user)
        return {"ok": True}

    @app.post(v1 + "/drafts/{draft_id}/groups", status_code=201)
    def draft_group(draft_id: str, request: Request, body: dict = Body(...)):
        _user(request)
        _, draft = _draft(draft_id)
        _require(body, "nodeIds", "name")
        gid = draft.group_nodes(body["nodeIds"], body["name"], body.get("tagColor"))
        return {"groupId": gid}

    @app.post(v1 + "/drafts/{draft_id}/visuals")
    def draft_visual(draft_id: str, request: Request, body: dict = Body(...)):
        _user(request)
        _, draft = _draft(draft_id)
        _require(body, "objectId", "change")
        position = tuple(body["position"]) if body.get("position") else None
        draft.set_node_visual(body["objectId"], body["change"], position)
        return {"ok": True}

    @app.delete(v1 + "/drafts/{draft_id}/objects/{object_id}")
    def draft_remove(draft_id: str, object_id: str, request: Request):
        _user(request)
        _, draft = _draft(draft_id)
        draft.remove_object(object_id)
        return {"ok": True}

    @app.post(v1 + "/drafts/{draft_id}/relayout")
    def draft_relayout(draft_id: str, request: Request, body: dict = Body(default={})):
        _user(request)
        _, draft = _draft(draft_id)
        from . import layout as layout_mod
        params = layout_mod.LayoutParams(seed=body.get("seed", 0))
        edges = [(r.source_id, r.target_id)
                 for r in draft.payload.relationships.values()]
        positions = layout_mod.relayout(draft.payload.objects.keys(), edges, params)
        draft.payload.positions = positions
        return {"positions": {k: list(v) for k, v in sorted(positions.items())}}

    # --- commits, states, history ---

    @app.post(v1 + "/documents/{doc_id}/commit", status_code=201)
    def commit(doc_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "branchId", "draftId")
        key = request.headers.get("Idempotency-Key")
        if key and (doc_id, key) in app.state.commit_keys:
            return {"stateId": app.state.commit_keys[(doc_id, key)], "replayed": True}
        doc = store.document(doc_id)
        owner_doc, draft = _draft(body["draftId"])
        if owner_doc != doc_id:
            raise SchemaViolation(f"draft {body['draftId']} belongs to {owner_doc}")
        state_id = doc.commit_state(body["branchId"], draft,
                                    body.get("message", ""), user)
        del app.state.drafts[body["draftId"]]
        if key:
            app.state.commit_keys[(doc_id, key)] = state_id
        return {"stateId": state_id, "replayed": False}

    @app.get(v1 + "/documents/{doc_id}/states/{state_id}")
    def checkout(doc_id: str, state_id: str, request: Request):
        user = _user(request)
        return store.document(doc_id).checkout(state_id, user).to_dict()

    @app.get(v1 + "/documents/{doc_id}/states/{state_id}/ancestry")
    def ancestry(doc_id: str, state_id: str):
        return {"ancestors": sorted(store.document(doc_id).ancestry(state_id))}

    @app.post(v1 + "/documents/{doc_id}/states/{state_id}/acknowledge")
    def acknowledge(doc_id: str, state_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "updateId")
        store.document(doc_id).acknowledge_update(state_id, body["updateId"], user)
        return {"ok": True}

    # --- diff / merge ---

    @app.get(v1 + "/documents/{doc_id}/diff")
    def get_diff(doc_id: str, request: Request, a: str = Query(...), b: str = Query(...)):
        user = _user(request)
        return diffmerge.diff(store.document(doc_id), a, b, user).to_dict()

    @app.post(v1 + "/documents/{doc_id}/merge", status_code=201)
    def post_merge(doc_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "targetBranch", "stateA", "stateB", "selection")
        selection = diffmerge.MergeSelection.from_dict(body["selection"])
        outcome = diffmerge.merge(store.document(doc_id), body["targetBranch"],
                                  body["stateA"], body["stateB"], selection, user,
                                  body.get("message", "merge"))
        return outcome.to_dict()

    # --- comments, flags, credibility events ---

    @app.post(v1 + "/documents/{doc_id}/comments", status_code=201)
    def post_comment(doc_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "branchId", "text")
        cid = store.document(doc_id).add_log_comment(body["branchId"], body["text"], user)
        return {"commentId": cid}

    @app.post(v1 + "/documents/{doc_id}/report-flag")
    def report_flag(doc_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "stateId", "flag")
        store.document(doc_id).mark_for_report(body["stateId"], body["flag"], user)
        return {"ok": True}

    @app.post(v1 + "/documents/{doc_id}/promote")
    def promote(doc_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "objectId")
        return store.document(doc_id).promote_credibility(body["objectId"], user).to_dict()

    @app.post(v1 + "/documents/{doc_id}/demote")
    def demote(doc_id: str, request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "objectId")
        return store.document(doc_id).demote_credibility(body["objectId"], user).to_dict()

    @app.get(v1 + "/documents/{doc_id}/events/pending")
    def pending_events(doc_id: str, request: Request):
        user = _user(request)
        return [e.to_dict() for e in store.document(doc_id).pending_for(user)]

    # --- reports ---

    @app.post(v1 + "/reports", status_code=201)
    def post_report(request: Request, body: dict = Body(...)):
        user = _user(request)
        _require(body, "documentId", "title", "sections")
        doc = store.document(body["documentId"])
        sections = [(s["stateId"], s.get("description", "")) for s in body["sections"]]
        rep = report_mod.build_report(doc, sections, body["title"], user)
        app.state.reports[rep.id] = rep
        _persist_report(store, rep)
        return rep.to_dict()

    @app.get(v1 + "/reports")
    def list_reports():
        return [
            {"id": r.id, "caseId": r.case_id, "title": r.title,
             "createdBy": r.created_by, "createdAt": r.created_at,
             "sections": len(r.sections)}
            for r in sorted(app.state.reports.values(), key=lambda r: r.id)
        ]

    @app.get(v1 + "/reports/{report_id}")
    def get_report(report_id: str):
        rep = app.state.reports.get(report_id)
        if rep is None:
            raise UnknownReport(f"unknown report {report_id}")
        return rep.to_dict()

    @app.get(v1 + "/reports/{report_id}/export")
    def export_report(report_id: str, format: str = Query("json")):
        rep = app.state.reports.get(report_id)
        if rep is None:
            raise UnknownReport(f"unknown report {report_id}")
        data = report_mod.export_report(rep, format)
        media = "text/html" if format == "html" else "application/json"
        return Response(content=data, media_type=media)

    return app


def _reports_dir(store: CaseStore) -> Optional[Path]:
    return store.root / "reports" if store.root else None


def _persist_report(store: CaseStore, rep) -> None:
    rdir = _reports_dir(store)
    if rdir is None:
        return
    rdir.mkdir(parents=True, exist_ok=True)
    (rdir / f"{rep.id}.json").write_bytes(canonical_json(rep.to_dict()))


def _load_reports(store: CaseStore, into: dict) -> None:
    rdir = _reports_dir(store)
    if rdir is None or not rdir.is_dir():
        return
    from .errors import CorruptStore
    for path in sorted(rdir.glob("*.json")):
        try:
            rep = report_mod.ReportDocument.from_dict(json.loads(path.read_text()))
            into[rep.id] = rep
        except (json.JSONDecodeError, KeyError) as exc:
            store.warnings.append(CorruptStore(f"{path}: {exc}"))


@dataclass
class ServiceHandle:
    config: ServiceConfig
    store: CaseStore
    app: FastAPI


def start_service(config: ServiceConfig) -> ServiceHandle:
    """Build the service: recover the store from disk and wire the app.

    Corrupt files are skipped and reported via ``store.warnings`` (and the
    health endpoint); the rest of the store is served.
    """
    root = config.resolved_root()
    if root is not None:
        root.mkdir(parents=True, exist_ok=True)
        if not os.access(root, os.W_OK):
            raise BindFailure(f"data root {root} is not writable")
    store = CaseStore(root, case_id=config.case_id)
    return ServiceHandle(config, store, create_app(store))


def run(config: ServiceConfig) -> None:
    """Blocking entry point used by ``casegraph serve``."""
    import uvicorn

    handle = start_service(config)
    host, _, port = config.listen_address.partition(":")
    try:
        uvicorn.run(handle.app, host=host or "127.0.0.1", port=int(port or 8800))
    except OSError as exc:
        raise BindFailure(f"cannot bind {config.listen_address}: {exc}") from exc
