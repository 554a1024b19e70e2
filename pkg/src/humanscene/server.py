"""HTTP annotation server backing the browser UI.

Data directory layout:

    data_dir/
      scenes/<scene id>.json
      motions/<motion id>.json
      qa.jsonl            # append-only QA store (single writer, file lock)
      ui/                 # optional static bundle served at /

Reads are concurrent; QA writes serialize through one advisory file lock and
each record is appended with a single write call, so the store never holds a
partial record.
"""

from __future__ import annotations

import fcntl
import json
import os
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .annotate import annotation_to_record
from .config import EngineConfig
from .errors import EngineError, PreconditionError, SchemaError
from .motion import MotionSequence, load_motion
from .pipeline import annotate_sequence
from .scene import Scene, load_scene
from .textgen import QARecord


class QASubmission(BaseModel):
    question: str
    answer: str
    subtask: str
    scene: str
    motion: str
    start_frame: int
    end_frame: int


def _error_body(code: str, message: str, detail=None) -> dict:
    return {"code": code, "message": message, "detail": detail}


class AnnotationStore:
    """File-backed store over the data directory, with an annotation cache."""

    def __init__(self, data_dir: str | Path, config: EngineConfig):
        self.data_dir = Path(data_dir)
        self.config = config
        self.qa_path = self.data_dir / "qa.jsonl"
        self._scenes: dict[str, Scene] = {}
        self._motions: dict[str, MotionSequence] = {}
        self._annotations: dict[tuple[str, str], dict] = {}

    def list_ids(self, kind: str) -> list[str]:
        directory = self.data_dir / kind
        if not directory.is_dir():
            return []
        return sorted(path.stem for path in directory.glob("*.json"))

    def scene(self, scene_id: str) -> Scene:
        if scene_id not in self._scenes:
            path = self.data_dir / "scenes" / f"{scene_id}.json"
            if not path.is_file():
                raise HTTPException(404, _error_body("not_found", f"no scene {scene_id!r}"))
            self._scenes[scene_id] = load_scene(path)
        return self._scenes[scene_id]

    def motion(self, motion_id: str) -> MotionSequence:
        if motion_id not in self._motions:
            path = self.data_dir / "motions" / f"{motion_id}.json"
            if not path.is_file():
                raise HTTPException(404, _error_body("not_found", f"no motion {motion_id!r}"))
            self._motions[motion_id] = load_motion(path)
        return self._motions[motion_id]

    def annotations(self, scene_id: str, motion_id: str) -> dict:
        key = (scene_id, motion_id)
        if key not in self._annotations:
            scene = self.scene(scene_id)
            motion = self.motion(motion_id)
            key_frames, annotations = annotate_sequence(scene, motion, self.config)
            config_hash = self.config.content_hash()
            self._annotations[key] = {
                "scene": scene_id,
                "motion": motion_id,
                "config_hash": config_hash,
                "num_frames": len(motion),
                "key_frames": key_frames,
                "annotations": [
                    annotation_to_record(a, scene_id, motion_id, config_hash)
                    for a in annotations
                ],
            }
        return self._annotations[key]

    def list_qa(self, scene_id: str | None = None, motion_id: str | None = None) -> list[dict]:
        if not self.qa_path.is_file():
            return []
        records = []
        for line in self.qa_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            if scene_id is not None and record.get("scene") != scene_id:
                continue
            if motion_id is not None and record.get("motion") != motion_id:
                continue
            records.append(record)
        return records

    def append_qa(self, record: QARecord) -> dict:
        """Append one record under an exclusive advisory lock; returns it with
        its assigned id. The write is a single call, atomic per record."""
        self.qa_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.qa_path, "a+", encoding="utf-8") as handle:
            fcntl.flock(handle.fileno(), fcntl.LOCK_EX)
            try:
                handle.seek(0)
                count = sum(1 for line in handle if line.strip())
                stored = {"id": f"qa-{count + 1:06d}", **record.to_dict()}
                handle.write(json.dumps(stored, ensure_ascii=False) + "\n")
                handle.flush()
                os.fsync(handle.fileno())
            finally:
                fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
        return stored


def create_app(data_dir: str | Path, config: EngineConfig | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    config = config or EngineConfig()
    store = AnnotationStore(data_dir, config)
    app = FastAPI(title="humanscene annotation server")
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content=_error_body("invalid_request", "request body failed validation",
                                detail=exc.errors()),
        )

    @app.exception_handler(HTTPException)
    async def on_http_error(request: Request, exc: HTTPException):
        body = exc.detail if isinstance(exc.detail, dict) else _error_body(
            "error", str(exc.detail)
        )
        return JSONResponse(status_code=exc.status_code, content=body)

    @app.exception_handler(EngineError)
    async def on_engine_error(request: Request, exc: EngineError):
        return JSONResponse(status_code=422,
                            content=_error_body("engine_error", str(exc)))

    @app.get("/api/scenes")
    def list_scenes():
        # Motion ids ride along so the UI can pair a sequence without an
        # extra endpoint.
        return {"scenes": store.list_ids("scenes"), "motions": store.list_ids("motions")}

    @app.get("/api/scene/{scene_id}")
    def get_scene(scene_id: str):
        path = store.data_dir / "scenes" / f"{scene_id}.json"
        if not path.is_file():
            raise HTTPException(404, _error_body("not_found", f"no scene {scene_id!r}"))
        return json.loads(path.read_text(encoding="utf-8"))

    @app.get("/api/motion/{motion_id}")
    def get_motion(motion_id: str):
        path = store.data_dir / "motions" / f"{motion_id}.json"
        if not path.is_file():
            raise HTTPException(404, _error_body("not_found", f"no motion {motion_id!r}"))
        return json.loads(path.read_text(encoding="utf-8"))

    @app.get("/api/annotations/{scene_id}/{motion_id}")
    def get_annotations(scene_id: str, motion_id: str):
        try:
            return store.annotations(scene_id, motion_id)
        except SchemaError as exc:
            raise HTTPException(422, _error_body("schema_error", str(exc))) from exc

    @app.get("/api/qa")
    def list_qa(scene: str | None = None, motion: str | None = None):
        return {"records": store.list_qa(scene, motion)}

    @app.post("/api/qa", status_code=201)
    def post_qa(submission: QASubmission):
        try:
            record = QARecord(
                question=submission.question,
                answer=submission.answer,
                subtask=submission.subtask,
                scene_id=submission.scene,
                motion_id=submission.motion,
                start_frame=submission.start_frame,
                end_frame=submission.end_frame,
            )
        except PreconditionError as exc:
            raise HTTPException(422, _error_body("invalid_record", str(exc))) from exc
        motion = store.motion(record.motion_id)  # 404 when unknown
        store.scene(record.scene_id)
        try:
            record.check_frame_range(len(motion))
        except PreconditionError as exc:
            raise HTTPException(422, _error_body("invalid_record", str(exc))) from exc
        return store.append_qa(record)

    resolved_ui = Path(ui_dir) if ui_dir is not None else store.data_dir / "ui"
    if resolved_ui.is_dir():
        app.mount("/", StaticFiles(directory=resolved_ui, html=True), name="ui")
    return app
