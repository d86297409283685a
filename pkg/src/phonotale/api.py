"""HTTP API (v1) for the practice platform.

All endpoints live under /v1 and speak JSON; audio uploads are multipart.
Errors use a structured body {code, message}: 4xx for contract violations,
5xx for adapter or store failures. Timestamps are UTC ISO-8601.
"""
from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel, Field

from . import errors as E
from .config import AppConfig
from .service import PracticeService
from .story import GenerationSpec, story_from_dict, story_to_dict

_STATUS_BY_ERROR = (
    (E.StoryNotFound, 404),
    (E.SessionNotFound, 404),
    (E.UnknownAttempt, 404),
    (E.UnresolvableAudio, 404),
    (E.OutOfVocabulary, 404),
    (E.TemplateNotFound, 404),
    (E.NoMatch, 404),
    (E.SessionNotActive, 409),
    (E.NoPendingChoice, 409),
    (E.InvalidOption, 400),
    (E.UnsupportedMode, 400),
    (E.UnknownSymbol, 400),
    (E.InsufficientWords, 400),
    (E.EmptyReference, 400),
    (E.ParseError, 400),
    (E.AdapterFailure, 502),
    (E.StoreUnavailable, 503),
)


def _status_for(exc: Exception) -> int:
    for klass, status in _STATUS_BY_ERROR:
        if isinstance(exc, klass):
            return status
    return 400 if isinstance(exc, (ValueError, KeyError)) else 500


class CreateSessionBody(BaseModel):
    child_id: str
    story_id: str
    mode: str = "word"


class ChoiceBody(BaseModel):
    option_id: str


class AttemptBody(BaseModel):
    audio_ref: str


class GenerateBody(BaseModel):
    target_phonemes: list[str]
    words: list[str]
    template_id: str
    seed: int = Field(default=0)


def create_app(config: AppConfig | None = None, service: PracticeService | None = None) -> FastAPI:
    service = service or PracticeService(config or AppConfig())
    app = FastAPI(title="phonotale", version="1")
    app.state.service = service

    frontend_dir = service.config.frontend_dir
    if frontend_dir and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/app", StaticFiles(directory=frontend_dir, html=True), name="app")

    @app.exception_handler(E.PhonotaleError)
    async def domain_error(_request: Request, exc: E.PhonotaleError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"code": type(exc).__name__, "message": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def value_error(_request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400, content={"code": "ValueError", "message": str(exc)}
        )

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "feature_table_version": service.table.version}

    # --- configuration: stories and words -----------------------------------

    @app.get("/v1/stories")
    def list_stories():
        return [
            {
                "story_id": s.story_id,
                "title": s.title,
                "target_phonemes": list(s.target_phonemes),
                "target_words": list(s.target_words),
                "mode_support": list(s.mode_support),
                "scene_count": len(s.scenes),
                "estimated_minutes": s.estimated_minutes,
            }
            for s in service.store.list_stories()
        ]

    @app.get("/v1/stories/{story_id}")
    def get_story(story_id: str):
        return story_to_dict(service.store.load_story(story_id))

    @app.post("/v1/stories", status_code=201)
    def save_story(doc: dict):
        story = story_from_dict(doc)
        violations = service.validate(story)
        if violations:
            return JSONResponse(
                status_code=422,
                content={
                    "code": "InvalidStory",
                    "message": "story failed validation",
                    "violations": [
                        {"code": v.code, "message": v.message, "where": v.where}
                        for v in violations
                    ],
                },
            )
        service.save_story(story)
        return {"story_id": story.story_id}

    @app.post("/v1/stories/validate")
    def validate_story_doc(doc: dict):
        violations = service.validate(story_from_dict(doc))
        return {
            "valid": not violations,
            "violations": [
                {"code": v.code, "message": v.message, "where": v.where}
                for v in violations
            ],
        }

    @app.post("/v1/stories/generate")
    def generate(body: GenerateBody):
        spec = GenerationSpec(
            tuple(body.target_phonemes), tuple(body.words), body.template_id, body.seed
        )
        return story_to_dict(service.generate_story(spec))

    @app.get("/v1/lexicon/recommend")
    def recommend(phoneme: str, position: str = "initial", count: int = 5):
        return {"words": service.recommend(phoneme, position, count)}

    @app.get("/v1/words/{word}/practice")
    def word_practice(word: str):
        return service.word_card(word)

    # --- practice sessions ----------------------------------------------------

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        summary = service.create_session(body.child_id, body.story_id, body.mode)
        summary["turn"] = service.current_turn(summary["session_id"])
        return summary

    @app.get("/v1/sessions/{session_id}")
    def session_summary(session_id: str):
        return service.session_summary(session_id)

    @app.get("/v1/sessions/{session_id}/turn")
    def current_turn(session_id: str):
        return service.current_turn(session_id)

    @app.post("/v1/sessions/{session_id}/attempts")
    async def submit_attempt(session_id: str, request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/"):
            form = await request.form()
            upload = form.get("audio")
            if upload is None:
                raise ValueError("multipart upload must include an 'audio' part")
            data = await upload.read()
            return service.submit_blob(session_id, data)
        body = AttemptBody.model_validate(await request.json())
        return service.submit(session_id, body.audio_ref)

    @app.post("/v1/sessions/{session_id}/choice")
    def apply_choice(session_id: str, body: ChoiceBody):
        return service.choose(session_id, body.option_id)

    @app.get("/v1/sessions/{session_id}/attempts/{attempt_id}/audio")
    def replay_attempt(session_id: str, attempt_id: str):
        return {"audio_ref": service.replay(session_id, attempt_id)}

    @app.get("/v1/sessions/{session_id}/events")
    def session_events(session_id: str):
        events = service.store.read_events(session_id)
        if not events:
            raise E.SessionNotFound(session_id)
        return [
            {"ts": e.ts, "session_id": e.session_id, "kind": e.kind, "payload": e.payload}
            for e in events
        ]

    @app.get("/v1/audio/{ref}")
    def audio(ref: str):
        return FileResponse(service.store.audio_path(ref), media_type="application/octet-stream")

    # --- clinician dashboard ----------------------------------------------------

    @app.get("/v1/children/{child_id}/dashboard")
    def dashboard(child_id: str, from_ts: str | None = None, to_ts: str | None = None):
        time_range = (from_ts, to_ts) if (from_ts or to_ts) else None
        return service.dashboard(child_id, time_range)

    @app.get("/v1/children/{child_id}/recordings")
    def recordings(
        child_id: str,
        word: str | None = None,
        band: str | None = None,
        session: str | None = None,
    ):
        filters = {
            k: v
            for k, v in (("word", word), ("band", band), ("session", session))
            if v is not None
        }
        return {"cards": service.cards(child_id, filters)}

    @app.get("/v1/children/{child_id}/report")
    def report(child_id: str, from_ts: str | None = None, to_ts: str | None = None):
        period = (from_ts, to_ts) if (from_ts or to_ts) else None
        doc = service.report(child_id, period)
        # render + parse keeps the exported field order identical to the file form
        return JSONResponse(content=doc, media_type="application/json")

    return app

