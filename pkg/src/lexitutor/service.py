"""HTTP facade: generation requests in, text (or a webhook callback) out.

Endpoints (all JSON): POST /api/generate, GET /api/levels, POST /api/sessions,
GET /api/sessions/{id}, POST /api/transcribe, GET /api/health. Sessions are
persisted one JSON file each so transcripts survive restarts. Every 4xx/5xx
body has the shape {"error_code": ..., "message": ...}.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import httpx
from fastapi import BackgroundTasks, FastAPI, File, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .checkpoint import load_checkpoint
from .corpus import Level, clean_and_tokenize
from .errors import EmptySeed, InvalidConfig, InvalidLevel
from .generation import GenerationRequest, generate
from .model import LanguageModel
from .speech import MockSpeechProvider, SpeechProvider, SpeechProviderError

logger = logging.getLogger("lexitutor.service")

WAV_CONTENT_TYPES = {"audio/wav", "audio/x-wav", "audio/wave", "audio/vnd.wave"}


@dataclass
class ServiceConfig:
    models_dir: Path
    data_dir: Path
    cors_origin: str = "*"
    webhook_retry_delays: tuple[float, ...] = (1.0, 2.0, 4.0)

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            models_dir=Path(os.environ.get("LEXITUTOR_MODELS_DIR", "models")),
            data_dir=Path(os.environ.get("LEXITUTOR_DATA_DIR", "data")),
            cors_origin=os.environ.get("LEXITUTOR_CORS_ORIGIN", "*"),
        )


class ApiError(Exception):
    def __init__(self, status: int, error_code: str, message: str):
        self.status = status
        self.error_code = error_code
        self.message = message


def load_registry(models_dir: Path) -> dict[Level, tuple[str, LanguageModel]]:
    """Load every `<level>.ckpt` under the models directory."""
    registry: dict[Level, tuple[str, LanguageModel]] = {}
    if not models_dir.is_dir():
        logger.warning("models directory %s does not exist; serving with no models", models_dir)
        return registry
    for path in sorted(models_dir.glob("*.ckpt")):
        try:
            level = Level(path.stem)
        except ValueError:
            logger.warning("skipping %s: file stem is not a level name", path.name)
            continue
        registry[level] = (path.stem, load_checkpoint(path))
        logger.info("loaded %s for level %s", path.name, level.value)
    return registry


class SessionStore:
    """One JSON file per session; appends are serialized per session."""

    def __init__(self, data_dir: Path):
        self.sessions_dir = data_dir / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.json"

    def create(self, level: Level) -> dict:
        record = {
            "session_id": str(uuid.uuid4()),
            "created_at": datetime.now(timezone.utc).isoformat(),
            "level": level.value,
            "turns": [],
        }
        self._write(record)
        return record

    def get(self, session_id: str) -> dict:
        path = self._path(session_id)
        if not path.is_file():
            raise ApiError(404, "not_found", f"unknown session {session_id}")
        with self._lock(session_id):
            return json.loads(path.read_text(encoding="utf-8"))

    def append_turn(self, session_id: str, turn: dict) -> None:
        path = self._path(session_id)
        with self._lock(session_id):
            record = json.loads(path.read_text(encoding="utf-8"))
            record["turns"].append(turn)
            self._write(record)

    def _write(self, record: dict) -> None:
        path = self._path(record["session_id"])
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(record, indent=2), encoding="utf-8")
        tmp.replace(path)


class GenerateBody(BaseModel):
    seed_text: str
    level: str
    num_words: int = 5
    strategy: str = "greedy"
    temperature: float = 1.0
    rng_seed: int | None = None
    session_id: str | None = None
    callback_url: str | None = None


class SessionBody(BaseModel):
    level: str


def deliver_webhook(url: str, payload: dict, delays: tuple[float, ...]) -> bool:
    """POST the payload, retrying on failure after each configured delay."""
    for attempt, delay in enumerate((0.0,) + tuple(delays)):
        if delay:
            time.sleep(delay)
        try:
            response = httpx.post(url, json=payload, timeout=10.0)
            if 200 <= response.status_code < 300:
                return True
            logger.warning("webhook attempt %d to %s got %d", attempt + 1, url,
                           response.status_code)
        except httpx.HTTPError as exc:
            logger.warning("webhook attempt %d to %s failed: %s", attempt + 1, url, exc)
    logger.error("webhook to %s abandoned after %d attempts", url, len(delays) + 1)
    return False


def create_app(config: ServiceConfig | None = None,
               speech_provider: SpeechProvider | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    provider = speech_provider or MockSpeechProvider()
    registry = load_registry(config.models_dir)
    store = SessionStore(config.data_dir)

    app = FastAPI(title="lexitutor", version="0.1.0")
    app.state.config = config
    app.state.registry = registry

    if config.cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error_code": exc.error_code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error_code": "bad_request", "message": str(exc.errors()[:1])},
        )

    @app.exception_handler(Exception)
    async def internal_handler(_request: Request, exc: Exception):
        logger.exception("unhandled error")
        return JSONResponse(
            status_code=500,
            content={"error_code": "internal", "message": str(exc)},
        )

    @app.middleware("http")
    async def access_log(request: Request, call_next):
        started = time.perf_counter()
        response = await call_next(request)
        logger.info(
            "%s %s -> %d (%.1f ms)",
            request.method,
            request.url.path,
            response.status_code,
            (time.perf_counter() - started) * 1000,
        )
        return response

    def parse_level(name: str) -> Level:
        try:
            return Level(name)
        except ValueError:
            raise ApiError(400, "invalid_level", f"unknown level {name!r}") from None

    def run_turn(body: GenerateBody, level: Level, model: LanguageModel,
                 model_id: str, session_id: str) -> dict:
        request = GenerationRequest(
            seed_text=body.seed_text,
            level=level,
            num_words=body.num_words,
            strategy=body.strategy,
            temperature=body.temperature,
            rng_seed=body.rng_seed,
        )
        started = time.perf_counter()
        try:
            result = generate(model, request)
        except EmptySeed as exc:
            raise ApiError(400, "empty_seed", str(exc)) from None
        except (InvalidConfig, InvalidLevel) as exc:
            raise ApiError(400, "bad_request", str(exc)) from None
        latency_ms = (time.perf_counter() - started) * 1000
        payload = {
            "session_id": session_id,
            "seed_text": body.seed_text,
            "generated_words": result.generated_words,
            "full_text": result.full_text,
            "level": level.value,
            "model_id": model_id,
            "latency_ms": latency_ms,
        }
        store.append_turn(
            session_id,
            {
                "seed_text": body.seed_text,
                "generated_words": result.generated_words,
                "full_text": result.full_text,
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "latency_ms": latency_ms,
            },
        )
        return payload

    @app.post("/api/generate")
    def handle_generate(body: GenerateBody, tasks: BackgroundTasks):
        level = parse_level(body.level)
        if level not in registry:
            raise ApiError(503, "no_model", f"no model loaded for level {level.value!r}")
        model_id, model = registry[level]
        if not clean_and_tokenize(body.seed_text):
            raise ApiError(400, "empty_seed", "seed text has no tokens after cleaning")
        try:
            GenerationRequest(seed_text=body.seed_text, level=level, num_words=body.num_words,
                              strategy=body.strategy, temperature=body.temperature).validate()
        except InvalidConfig as exc:
            raise ApiError(400, "bad_request", str(exc)) from None

        if body.session_id is not None:
            session_id = store.get(body.session_id)["session_id"]
        else:
            session_id = store.create(level)["session_id"]

        if body.callback_url:
            def generate_and_deliver():
                payload = run_turn(body, level, model, model_id, session_id)
                deliver_webhook(body.callback_url, payload,
                                app.state.config.webhook_retry_delays)

            tasks.add_task(generate_and_deliver)
            return JSONResponse(status_code=202,
                                content={"session_id": session_id, "status": "accepted"})

        return run_turn(body, level, model, model_id, session_id)

    @app.get("/api/levels")
    def handle_levels():
        return [
            {
                "level": level.value,
                "model_id": model_id,
                "vocab_size": model.config.vocab_size,
                "window": model.config.window,
            }
            for level, (model_id, model) in sorted(registry.items(), key=lambda kv: kv[0].value)
        ]

    @app.post("/api/sessions")
    def handle_session_create(body: SessionBody):
        return store.create(parse_level(body.level))

    @app.get("/api/sessions/{session_id}")
    def handle_session_get(session_id: str):
        return store.get(session_id)

    @app.post("/api/transcribe")
    def handle_transcribe(file: UploadFile = File(...)):
        content_type = (file.content_type or "").split(";")[0].strip().lower()
        if content_type not in WAV_CONTENT_TYPES:
            raise ApiError(415, "unsupported_media_type",
                           f"expected WAV audio, got {content_type or 'unknown'!r}")
        audio = file.file.read()
        try:
            text = provider.transcribe(audio, "wav")
        except Exception as exc:
            raise ApiError(502, "speech_provider_error", str(exc)) from None
        return {"text": text}

    @app.get("/api/health")
    def handle_health():
        return {"status": "ok", "models_loaded": len(registry)}

    return app
