"""REST service: speech synthesis, generation, motion library, projects.

The inference model is loaded once and treated as immutable, so generate
requests can run concurrently; project persistence is a single JSON-lines
file with writes serialized behind a lock.  Conventional REST under /api;
the interactive web client is served as static files when built.
"""
from __future__ import annotations

import hashlib
import json
import threading
import time
import uuid
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import controls as controls_mod
from . import keyframe, poses, skeleton, speech, stylestats, synthesis
from .errors import EmptyAudio, InvalidSpeedLevel, SgtError, TtsUnavailable, UnknownGesture
from .motionlib import SPEED_LEVELS, MotionLibrary
from .skeleton import SkeletonSpec

HISTORY_DEPTH = 100


def load_controls_schema() -> dict:
    with resources.files("sgt").joinpath("data/schemas/controls.schema.json").open() as f:
        return json.load(f)


class ProjectStore:
    """Single-file JSON-lines store; the last record per id wins."""

    def __init__(self, path: Path | None):
        self._path = path
        self._lock = threading.Lock()
        self._projects: dict[str, dict] = {}
        if path is not None and path.exists():
            with open(path) as f:
                for line in f:
                    if not line.strip():
                        continue
                    record = json.loads(line)
                    if record.get("deleted"):
                        self._projects.pop(record["id"], None)
                    else:
                        self._projects[record["id"]] = record
    def _append(self, record: dict) -> None:
        if self._path is None:
            return
        with open(self._path, "a") as f:
            f.write(json.dumps(record) + "\n")

    def list(self) -> list[dict]:
        with self._lock:
            return sorted(self._projects.values(), key=lambda p: p["created_at"])

    def get(self, project_id: str) -> dict | None:
        with self._lock:
            return self._projects.get(project_id)

    def put(self, project: dict) -> None:
        with self._lock:
            self._projects[project["id"]] = project
            self._append(project)

    def delete(self, project_id: str) -> bool:
        with self._lock:
            if project_id not in self._projects:
                return False
            del self._projects[project_id]
            self._append({"id": project_id, "deleted": True})
            return True


class SpeechRequest(BaseModel):
    text: str


class GenerateRequest(BaseModel):
    audio_id: str
    controls: dict = {}
    mode: str = "model"


class ProjectCreate(BaseModel):
    name: str = ""
    text: str = ""
    audio_id: str | None = None
    controls: dict = {}


class ProjectUpdate(BaseModel):
    name: str | None = None
    text: str | None = None
    audio_id: str | None = None
    controls: dict | None = None
    motion: dict | None = None


def create_app(
    model=None,
    data_dir=None,
    library: MotionLibrary | None = None,
    tts=None,
    aligner=None,
    static_dir=None,
) -> FastAPI:
    app = FastAPI(title="speech gesture service", version="1.0")
    skel: SkeletonSpec = model.skeleton if model is not None else SkeletonSpec()
    mean = model.mean_pose if model is not None else poses.rest_pose(skel)
    schema = load_controls_schema()
    store = ProjectStore(Path(data_dir) / "projects.jsonl" if data_dir else None)
    audio_cache: dict[str, dict] = {}
    cache_lock = threading.Lock()
    tts = tts or speech.default_tts()
    aligner = aligner or speech.default_aligner()

    def validated_tracks(controls_json: dict, n_frames: int):
        try:
            jsonschema.validate(controls_json, schema)
            return controls_mod.controls_from_json(controls_json, n_frames, skel)
        except (jsonschema.ValidationError, SgtError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"bad controls: {exc}") from exc

    def style_payload(frames: np.ndarray) -> dict:
        if len(frames) < 2:
            return {"style_track": [[0.0, 0.0, 0.0] for _ in range(len(frames))], "style_normalized": model is not None}
        raw = stylestats.style_track(frames)
        if model is not None:
            return {"style_track": stylestats.normalize_style(raw, model.norm_stats).tolist(), "style_normalized": True}
        return {"style_track": raw.tolist(), "style_normalized": False}

    @app.get("/api/status")
    def status():
        return {
            "model_loaded": model is not None,
            "fps": skeleton.FPS,
            "joints": list(skel.joints),
            "gestures": len(library) if library is not None else 0,
        }

    @app.get("/api/schema/controls")
    def controls_schema():
        return schema

    @app.post("/api/speech")
    def make_speech(req: SpeechRequest):
        if not speech.tokenize(req.text):
            raise HTTPException(status_code=400, detail="empty text")
        try:
            wav, sr, timings = speech.synthesize_speech(req.text, tts, aligner)
        except EmptyAudio as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except TtsUnavailable as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        n_frames = max(1, round(len(wav) / sr * skeleton.FPS))
        audio_id = hashlib.sha256(f"{req.text}|{sr}".encode()).hexdigest()[:16]
        envelope = _frame_envelope(wav, sr, n_frames)
        with cache_lock:
            audio_cache[audio_id] = {
                "text": req.text,
                "waveform": wav,
                "sample_rate": sr,
                "timings": timings,
                "n_frames": n_frames,
            }
        return {
            "audio_id": audio_id,
            "n_frames": n_frames,
            "timings": speech.timings_to_json(timings),
            "envelope": envelope,
        }

    @app.get("/api/audio/{audio_id}")
    def get_audio(audio_id: str):
        with cache_lock:
            entry = audio_cache.get(audio_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown audio_id")
        return Response(
            content=speech.write_wav_bytes(entry["waveform"], entry["sample_rate"]),
            media_type="audio/wav",
        )

    @app.post("/api/generate")
    def generate(req: GenerateRequest):
        with cache_lock:
            entry = audio_cache.get(req.audio_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown audio_id")
        if req.mode not in ("model", "keyframe"):
            raise HTTPException(status_code=422, detail="mode must be 'model' or 'keyframe'")
        n_frames = entry["n_frames"]
        cp, cs = validated_tracks(req.controls, n_frames)
        if req.mode == "model":
            if model is None:
                raise HTTPException(status_code=409, detail="model not loaded")
            ctx = speech.context_from_audio(
                entry["text"], entry["waveform"], entry["sample_rate"], entry["timings"], model.dictionary, n_frames
            )
            motion = synthesis.generate_long(ctx, cp, cs, model)
        else:
            keys = [
                (i, skeleton.to_pose(cp.poses[i].reshape(-1, 3), skel))
                for i in np.flatnonzero(cp.mask).tolist()
            ]
            motion = keyframe.interpolate(keys, n_frames, mean, skel)
        doc = skeleton.motion_to_json(motion, skel)
        doc.update(style_payload(motion.frames))
        return doc

    @app.get("/api/motion-library")
    def list_library(tag: str | None = None):
        if library is None:
            return {"gestures": []}
        return {"gestures": library.list_gestures(tag)}

    @app.get("/api/motion-library/{gesture_id}")
    def get_gesture(gesture_id: str, speed: int = 1, flip: bool = False):
        if library is None:
            raise HTTPException(status_code=404, detail="no motion library")
        if speed not in SPEED_LEVELS:
            raise HTTPException(status_code=422, detail=f"speed must be one of {SPEED_LEVELS}")
        try:
            motion = library.instantiate(gesture_id, speed, flip)
        except UnknownGesture as exc:
            raise HTTPException(status_code=404, detail=f"unknown gesture {exc}") from exc
        except InvalidSpeedLevel as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return skeleton.motion_to_json(motion, skel)

    @app.get("/api/projects")
    def list_projects():
        return {"projects": store.list()}

    @app.post("/api/projects", status_code=201)
    def create_project(req: ProjectCreate):
        validated_tracks(req.controls, max(_controls_extent(req.controls), 1))
        now = time.time()
        project = {
            "id": uuid.uuid4().hex[:12],
            "name": req.name,
            "text": req.text,
            "audio_id": req.audio_id,
            "controls": req.controls,
            "motion": None,
            "created_at": now,
            "updated_at": now,
            "undo": [],
            "redo": [],
        }
        store.put(project)
        return project

    @app.get("/api/projects/{project_id}")
    def get_project(project_id: str):
        project = store.get(project_id)
        if project is None:
            raise HTTPException(status_code=404, detail="unknown project")
        return project

    @app.put("/api/projects/{project_id}")
    def update_project(project_id: str, req: ProjectUpdate):
        project = store.get(project_id)
        if project is None:
            raise HTTPException(status_code=404, detail="unknown project")
        project = dict(project)
        if req.controls is not None:
            validated_tracks(req.controls, max(_controls_extent(req.controls), 1))
            project["undo"] = (project["undo"] + [project["controls"]])[-HISTORY_DEPTH:]
            project["redo"] = []
            project["controls"] = req.controls
        for field in ("name", "text", "audio_id", "motion"):
            value = getattr(req, field)
            if value is not None:
                project[field] = value
        project["updated_at"] = time.time()
        store.put(project)
        return project

    @app.delete("/api/projects/{project_id}")
    def delete_project(project_id: str):
        if not store.delete(project_id):
            raise HTTPException(status_code=404, detail="unknown project")
        return {"deleted": project_id}

    def _walk_history(project_id: str, source: str, target: str):
        project = store.get(project_id)
        if project is None:
            raise HTTPException(status_code=404, detail="unknown project")
        project = dict(project)
        if not project[source]:
            raise HTTPException(status_code=409, detail=f"nothing to {source[:4]}")
        project[target] = (project[target] + [project["controls"]])[-HISTORY_DEPTH:]
        project["controls"] = project[source][-1]
        project[source] = project[source][:-1]
        project["updated_at"] = time.time()
        store.put(project)
        return project

    @app.post("/api/projects/{project_id}/undo")
    def undo(project_id: str):
        return _walk_history(project_id, "undo", "redo")

    @app.post("/api/projects/{project_id}/redo")
    def redo(project_id: str):
        return _walk_history(project_id, "redo", "undo")

    if static_dir is not None and Path(static_dir).exists():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def _controls_extent(controls_json: dict) -> int:
    extent = 0
    for seg in controls_json.get("pose_controls", []):
        extent = max(extent, int(seg.get("start", 0)) + len(seg.get("frames", [])))
    for seg in controls_json.get("style_controls", []):
        extent = max(extent, int(seg.get("end", 0)))
    return extent


def _frame_envelope(wav: np.ndarray, sr: int, n_frames: int) -> list[float]:
    env = []
    for i in range(n_frames):
        lo = int(np.floor(i * sr / skeleton.FPS))
        hi = int(np.floor((i + 1) * sr / skeleton.FPS))
        seg = wav[lo:hi]
        env.append(float(np.sqrt(np.mean(seg**2))) if seg.size else 0.0)
    return env
