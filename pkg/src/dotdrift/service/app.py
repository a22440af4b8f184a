"""HTTP API: issue a challenge, stream its media, validate one answer.

Endpoints (JSON bodies, UTF-8):

  POST /v1/challenges                    -> 201 issue payload | 429 | 503
  GET  /v1/challenges/{token}/media      -> 200 image/gif | 404 | 410
  POST /v1/challenges/{token}/verify     -> 200 verdict | 404 | 409
  GET  /v1/healthz                       -> 200
  GET  /demo                             -> embeddable-widget demo page

Issue payloads never contain the answer: tokens are filtered against it,
media URLs are token-derived, and prompt/warning strings are digit-free
constants.  ``expires_at`` is RFC 3339 UTC, identical in form for every
challenge.
"""

from __future__ import annotations

import random
import threading
from contextlib import asynccontextmanager
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, JSONResponse, Response
from pydantic import BaseModel

from ..errors import StoreFullError
from ..gifenc import encode_gif
from ..pool import VariantManifest
from ..render import render_sequence
from ..spec import ChallengeSpec
from .config import ServiceConfig
from .ratelimit import SlidingWindowLimiter
from .store import ChallengeStore

SWEEP_INTERVAL_SECONDS = 5.0


class VerifyRequest(BaseModel):
    answer: str


def rfc3339(epoch_seconds: float) -> str:
    return datetime.fromtimestamp(epoch_seconds, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class MediaCache:
    """Token-independent GIF byte cache for pool files and rendered specs."""

    def __init__(self, pool_dir: Path | None, limit: int = 32):
        self.pool_dir = pool_dir
        self.limit = limit
        self._lock = threading.Lock()
        self._cache: dict[str, bytes] = {}

    def _remember(self, key: str, data: bytes) -> bytes:
        with self._lock:
            if len(self._cache) >= self.limit:
                self._cache.pop(next(iter(self._cache)))
            self._cache[key] = data
        return data

    def for_record(self, record) -> bytes:
        key = record.media_file or f"spec:{record.token}"
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        if record.media_file is not None:
            data = (self.pool_dir / record.media_file).read_bytes()
        else:
            # Deterministic regeneration: the journaled spec is the media.
            data = encode_gif(render_sequence(ChallengeSpec.from_json_dict(record.spec_json)))
        return self._remember(key, data)


def _demo_page() -> str:
    return """<!doctype html>
<html>
<head><meta charset="utf-8"><title>verification demo</title></head>
<body>
<h1>Human verification demo</h1>
<div id="challenge-root"></div>
<script src="/demo/widget.js"></script>
<script>
  if (window.DotDriftWidget) {
    window.DotDriftWidget.mount(document.getElementById("challenge-root"), "", {
      onPass: function () { console.log("verified"); },
      onFail: function () { console.log("rejected"); },
    });
  } else {
    document.getElementById("challenge-root").textContent =
      "Widget script not built; run the frontend build and restart with widget_script set.";
  }
</script>
</body>
</html>
"""


def create_app(
    config: ServiceConfig,
    store: ChallengeStore | None = None,
    manifest: VariantManifest | None = None,
    selection_rng: random.Random | None = None,
) -> FastAPI:
    pool_dir = None
    if manifest is None and config.pool_path:
        manifest_path = Path(config.pool_path)
        if manifest_path.is_dir():
            manifest_path = manifest_path / "manifest.json"
        manifest = VariantManifest.load(manifest_path)
        pool_dir = manifest_path.parent
        manifest.validate(pool_dir)
    elif config.pool_path:
        pool_dir = Path(config.pool_path)
        if pool_dir.is_file():
            pool_dir = pool_dir.parent
    if manifest is not None and len(manifest) == 0 and not config.generation_enabled:
        raise ValueError("pool manifest is empty and generation is disabled")
    if manifest is None and not config.generation_enabled:
        raise ValueError("no pool configured and generation is disabled")

    # not `store or ...`: an empty store is falsy via __len__
    store = store if store is not None else ChallengeStore(
        ttl_seconds=config.ttl_seconds,
        max_attempts=config.max_attempts,
        max_records=config.max_records,
        journal_path=config.journal_path,
        ignore_leading_zeros=config.ignore_leading_zeros,
    )
    limiter = SlidingWindowLimiter(config.rate_limit_per_minute, window_seconds=60.0)
    media = MediaCache(pool_dir)
    rng = selection_rng or random.SystemRandom()
    stop_sweeper = threading.Event()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        def sweep_loop():
            while not stop_sweeper.wait(SWEEP_INTERVAL_SECONDS):
                store.expire_sweep()

        thread = threading.Thread(target=sweep_loop, name="expiry-sweeper", daemon=True)
        thread.start()
        try:
            yield
        finally:
            stop_sweeper.set()
            thread.join(timeout=2.0)
            store.close()

    app = FastAPI(lifespan=lifespan)
    # the widget embeds in arbitrary survey pages, so the API must answer
    # cross-origin; payloads are already answer-free by construction
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.store = store
    app.state.manifest = manifest
    app.state.config = config

    def _draw_generated_spec() -> ChallengeSpec:
        value = "".join(rng.choice("0123456789") for _ in range(config.value_length))
        return ChallengeSpec(value=value, seed=rng.getrandbits(64))

    @app.post("/v1/challenges", status_code=201)
    def issue_challenge(request: Request):
        client = request.client.host if request.client else "unknown"
        if not limiter.allow(client):
            return JSONResponse(
                status_code=429, content={"detail": "challenge issuance rate limit exceeded"}
            )
        try:
            if manifest is not None and len(manifest) > 0:
                entry = manifest.entries[rng.randrange(len(manifest))]
                record = store.issue(
                    entry.value,
                    media_file=entry.media_file,
                    prompt_text=config.prompt_text,
                    warning_text=config.warning_text,
                )
            else:
                spec = _draw_generated_spec()
                record = store.issue(
                    spec.value,
                    spec_json=spec.to_json_dict(),
                    prompt_text=config.prompt_text,
                    warning_text=config.warning_text,
                )
        except StoreFullError as exc:
            return JSONResponse(status_code=503, content={"detail": str(exc)})
        return {
            "token": record.token,
            "media_url": f"/v1/challenges/{record.token}/media",
            "prompt_text": record.prompt_text,
            "warning_text": record.warning_text,
            "expires_at": rfc3339(record.expires_at),
        }

    @app.get("/v1/challenges/{token}/media")
    def serve_media(token: str):
        status, record = store.media_status(token)
        if status == "unknown":
            return JSONResponse(status_code=404, content={"detail": "unknown challenge token"})
        if status == "expired":
            return JSONResponse(status_code=410, content={"detail": "challenge expired"})
        return Response(content=media.for_record(record), media_type="image/gif")

    @app.post("/v1/challenges/{token}/verify")
    def verify_answer(token: str, body: VerifyRequest):
        result = store.verify(token, body.answer)
        if result.status == "unknown":
            return JSONResponse(status_code=404, content={"detail": "unknown challenge token"})
        payload = {"verdict": result.verdict, "attempts_remaining": result.attempts_remaining}
        if result.status == "terminal":
            return JSONResponse(status_code=409, content=payload)
        return payload

    @app.get("/v1/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/demo", response_class=HTMLResponse)
    def demo_page():
        return _demo_page()

    @app.get("/demo/widget.js")
    def widget_script():
        if config.widget_script and Path(config.widget_script).is_file():
            return Response(
                content=Path(config.widget_script).read_bytes(),
                media_type="text/javascript",
            )
        return JSONResponse(status_code=404, content={"detail": "widget script not built"})

    return app
