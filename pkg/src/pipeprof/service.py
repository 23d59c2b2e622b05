"""HTTP API exposing collections and analyses with session-scoped subsets."""

from __future__ import annotations

import io
import threading
import uuid
import zipfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

from fastapi import FastAPI, Request, Response, UploadFile
from fastapi.responses import JSONResponse

from . import serialize
from .analytics import subset
from .errors import (
    EmptySubset,
    KOutOfRange,
    MissingMetric,
    PipeprofError,
    UnknownPipelineId,
    UnknownPrimitive,
)
from .merge import merge_many, merged_from_dag
from .model import PipelineCollection, derive_dag, load_collection


@dataclass
class Session:
    id: str
    collection_id: str
    active: PipelineCollection  # current subset
    created_at: str
    lock: threading.Lock = field(default_factory=threading.Lock)
    memo: dict = field(default_factory=dict)


class _ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        self.status = status
        self.body = {"code": code, "message": message, "detail": detail}


def _json(payload: dict, status: int = 200) -> Response:
    # Shared serializer keeps responses byte-identical to CLI report files.
    return Response(
        content=serialize.dumps(payload),
        media_type="application/json",
        status_code=status,
    )


def create_app(preloaded: list[PipelineCollection] | None = None) -> FastAPI:
    app = FastAPI(title="pipeprof")
    collections: dict[str, PipelineCollection] = {
        c.id: c for c in (preloaded or [])
    }
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()

    @app.exception_handler(_ApiError)
    async def api_error_handler(request: Request, exc: _ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body)

    def get_collection(collection_id: str) -> PipelineCollection:
        c = collections.get(collection_id)
        if c is None:
            raise _ApiError(404, "unknown_collection", f"no collection {collection_id!r}")
        return c

    def get_session(session_id: str) -> Session:
        s = sessions.get(session_id)
        if s is None:
            raise _ApiError(404, "unknown_session", f"no session {session_id!r}")
        return s

    def memoized(session: Session, key: tuple, build):
        with session.lock:
            if key not in session.memo:
                session.memo[key] = build(session.active)
            return session.memo[key]

    def translate(err: PipeprofError) -> _ApiError:
        if isinstance(err, (UnknownPipelineId, UnknownPrimitive)):
            return _ApiError(404, "unknown_reference", str(err))
        if isinstance(err, (MissingMetric, KOutOfRange, EmptySubset)):
            return _ApiError(400, "invalid_params", str(err))
        return _ApiError(422, "ingestion_failed", str(err))

    @app.get("/collections")
    def list_collections():
        return _json(
            {
                "schema_version": serialize.SCHEMA_VERSION,
                "collections": [
                    {
                        "id": c.id,
                        "problem": {
                            "task_type": c.problem.task_type,
                            "dataset_name": c.problem.dataset_name,
                            "primary_metric": c.problem.primary_metric,
                        },
                        "pipeline_count": len(c.pipelines),
                    }
                    for c in sorted(collections.values(), key=lambda c: c.id)
                ],
            }
        )

    @app.post("/collections", status_code=201)
    async def upload_collection(
        documents: list[UploadFile],
        task_type: str = "classification",
        dataset: str = "unknown",
        metric: str = "accuracy",
    ):
        texts = [(await f.read()).decode("utf-8") for f in documents]
        try:
            if len(texts) == 1 and documents[0].filename == "collection.json":
                import json as _json_mod

                bundle = _json_mod.loads(texts[0])
                c = load_collection(
                    bundle["pipelines"], bundle["problem"], bundle.get("id")
                )
            else:
                c = load_collection(
                    texts,
                    {
                        "task_type": task_type,
                        "dataset_name": dataset,
                        "primary_metric": metric,
                    },
                )
        except PipeprofError as e:
            raise _ApiError(422, "ingestion_failed", "bundle rejected", str(e))
        with store_lock:
            collections[c.id] = c
        return _json({"id": c.id}, status=201)

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        c = get_collection(body.get("collection_id", ""))
        session = Session(
            id=uuid.uuid4().hex,
            collection_id=c.id,
            active=c,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        with store_lock:
            sessions[session.id] = session
        return _json({"session_id": session.id}, status=201)

    @app.patch("/sessions/{session_id}/subset")
    def patch_subset(session_id: str, body: dict):
        session = get_session(session_id)
        keep = body.get("keep", [])
        base = get_collection(session.collection_id)
        try:
            active = subset(base, keep)
        except PipeprofError as e:
            raise translate(e)
        with session.lock:
            session.active = active
            session.memo.clear()
        return _json(
            {
                "schema_version": serialize.SCHEMA_VERSION,
                "session_id": session.id,
                "pipeline_count": len(active.pipelines),
                "primitive_count": len(active.vocabulary),
            }
        )

    @app.get("/sessions/{session_id}/matrix")
    def get_matrix(
        session_id: str,
        rows: str = "metric",
        cols: str = "family",
        metric: str | None = None,
    ):
        session = get_session(session_id)
        try:
            payload = memoized(
                session,
                ("matrix", rows, cols, metric),
                lambda c: serialize.matrix_payload(c, metric, rows=rows, cols=cols),
            )
        except PipeprofError as e:
            raise translate(e)
        return _json(payload)

    @app.get("/sessions/{session_id}/hyperparams/{primitive:path}")
    def get_hyperparams(session_id: str, primitive: str):
        session = get_session(session_id)
        try:
            payload = memoized(
                session,
                ("hyperparams", primitive),
                lambda c: serialize.onehot_payload(c, primitive),
            )
        except PipeprofError as e:
            raise translate(e)
        return _json(payload)

    @app.get("/sessions/{session_id}/cpc")
    def get_cpc(session_id: str, metric: str | None = None, k: int = 3):
        session = get_session(session_id)
        if k < 2:
            raise _ApiError(400, "invalid_params", f"k must be >= 2, got {k}")
        try:
            payload = memoized(
                session,
                ("cpc", metric, k),
                lambda c: serialize.cpc_payload(c, metric, k),
            )
        except PipeprofError as e:
            raise translate(e)
        return _json(payload)

    @app.post("/sessions/{session_id}/merge")
    def post_merge(session_id: str, body: dict):
        session = get_session(session_id)
        pipeline_ids = body.get("pipeline_ids", [])
        if not pipeline_ids:
            raise _ApiError(400, "invalid_params", "pipeline_ids must be non-empty")

        def build(c: PipelineCollection):
            graphs = []
            for pid in pipeline_ids:
                p = c.get(pid)
                if p is None:
                    raise UnknownPipelineId(f"unknown pipeline id {pid!r}")
                graphs.append(merged_from_dag(derive_dag(p), pid))
            return serialize.merged_payload(merge_many(graphs))

        try:
            payload = memoized(session, ("merge", tuple(pipeline_ids)), build)
        except PipeprofError as e:
            raise translate(e)
        return _json(payload)

    @app.get("/sessions/{session_id}/export")
    def get_export(session_id: str):
        session = get_session(session_id)
        with session.lock:
            payload = serialize.collection_payload(session.active)
        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
            zf.writestr("collection.json", serialize.dumps(payload))
        return Response(
            content=buf.getvalue(),
            media_type="application/zip",
            headers={
                "Content-Disposition": 'attachment; filename="bundle.zip"'
            },
        )

    return app
