"""HTTP interface to the verification workbench.

A thin FastAPI layer: pydantic models validate the payloads, the
Workbench does the thinking, and the optional static mount serves the
web verification client under /ui.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Header, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import __version__
from .errors import DuplicateQueueError, LexmergeError, UnknownItemError
from .store import SCHEMA_VERSION
from .verify import Workbench

VERIFIER_HEADER = "X-Verifier-Id"


class CreateQueueRequest(BaseModel):
    queue_id: str
    items: list[dict] = Field(min_length=1)


class VerdictRequest(BaseModel):
    verdict: str
    corrected: str | None = None
    idempotency_key: str | None = None


class ItemResponse(BaseModel):
    item_id: str
    queue_id: str
    index: int
    kind: str
    status: str
    payload: dict


class StatsResponse(BaseModel):
    queue_id: str
    total: int
    judged: int
    pct_correct: float | None
    accepted: int
    rejected: int
    corrected: int
    pending: int


class VerdictResponse(BaseModel):
    item: str
    verdict: str
    corrected: str | None
    verifier: str
    replayed: bool = False


def _item_response(item) -> ItemResponse:
    return ItemResponse(
        item_id=item.item_id, queue_id=item.queue_id, index=item.index,
        kind=item.kind, status=item.status, payload=item.payload)


def create_app(workbench: Workbench | None = None,
               state_dir: str | Path = "verify-state",
               ui_dir: str | Path | None = None) -> FastAPI:
    """Build the service around an existing or freshly opened workbench."""
    bench = workbench if workbench is not None else Workbench(state_dir)
    app = FastAPI(title="lexmerge verification service", version=__version__)
    app.state.workbench = bench

    @app.exception_handler(LexmergeError)
    async def _lexmerge_error(request: Request, exc: LexmergeError):
        if isinstance(exc, UnknownItemError):
            status = 404
        elif isinstance(exc, DuplicateQueueError):
            status = 409
        else:
            status = 422
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__,
                "schema_version": SCHEMA_VERSION}

    @app.get("/api/queues", response_model=list[StatsResponse])
    def list_queues():
        return [bench.stats(qid) for qid in bench.queue_ids()]

    @app.post("/api/queues", response_model=StatsResponse, status_code=201)
    def create_queue(body: CreateQueueRequest):
        queue = bench.create_queue(body.queue_id, body.items)
        return bench.stats(queue.queue_id)

    @app.get("/api/queues/{queue_id}", response_model=StatsResponse)
    def queue_stats(queue_id: str):
        return bench.stats(queue_id)

    @app.get("/api/queues/{queue_id}/stats", response_model=StatsResponse)
    def queue_stats_alias(queue_id: str):
        return bench.stats(queue_id)

    @app.get("/api/queues/{queue_id}/next", response_model=ItemResponse,
             responses={204: {"description": "queue drained"}})
    def next_item(queue_id: str,
                  x_verifier_id: str = Header(default="anonymous",
                                              alias=VERIFIER_HEADER)):
        item = bench.next_item(queue_id, verifier=x_verifier_id)
        if item is None:
            return Response(status_code=204)
        return _item_response(item)

    @app.get("/api/items/{item_id}", response_model=ItemResponse)
    def get_item(item_id: str):
        return _item_response(bench.item(item_id))

    @app.post("/api/items/{item_id}/verdict", response_model=VerdictResponse)
    def submit_verdict(item_id: str, body: VerdictRequest,
                       x_verifier_id: str = Header(default="anonymous",
                                                   alias=VERIFIER_HEADER)):
        record = bench.submit(
            item_id, body.verdict, corrected=body.corrected,
            verifier=x_verifier_id, idempotency_key=body.idempotency_key)
        return VerdictResponse(
            item=record["item"], verdict=record["verdict"],
            corrected=record.get("corrected"), verifier=record["verifier"],
            replayed=bool(record.get("replayed", False)))

    @app.get("/api/queues/{queue_id}/export-seeds")
    def export_seeds(queue_id: str):
        import json

        lines = "".join(
            json.dumps(seed, ensure_ascii=False) + "\n"
            for seed in bench.export_seeds(queue_id))
        return PlainTextResponse(lines, media_type="application/x-ndjson")

    ui_path = Path(ui_dir) if ui_dir is not None else None
    if ui_path is not None and ui_path.is_dir():
        app.mount("/ui", StaticFiles(directory=ui_path, html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def index():
            return RedirectResponse("/ui/")
    else:
        @app.get("/", include_in_schema=False)
        def index():
            return {"service": "lexmerge", "version": __version__,
                    "api": "/api/queues"}

    return app
