"""Chat-model access: request/response types, backends, caching, retries.

A :class:`Gateway` fronts one backend.  Live responses are persisted to a
response store (directory of JSON files named by request digest); a
gateway constructed without a backend serves exclusively from such a
store, which is how recorded runs replay offline.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

import requests

from autopk.errors import ProviderUnavailable, ReplayMiss
from autopk.gateway.templates import ChatMessage

DEFAULT_TEMPERATURE = 0.0
DEFAULT_TOP_P = 0.95


def _digest(model: str, messages: tuple[ChatMessage, ...], temperature: float, top_p: float) -> str:
    payload = json.dumps(
        {
            "model": model,
            "messages": [m.as_dict() for m in messages],
            "temperature": temperature,
            "top_p": top_p,
        },
        sort_keys=True,
        ensure_ascii=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class LlmRequest:
    model: str
    messages: tuple[ChatMessage, ...]
    temperature: float = DEFAULT_TEMPERATURE
    top_p: float = DEFAULT_TOP_P

    @property
    def cache_key(self) -> str:
        return _digest(self.model, self.messages, self.temperature, self.top_p)


@dataclass(frozen=True)
class LlmResponse:
    text: str
    provenance: str  # "live" | "cache" | "replay"
    latency_ms: int = 0


class TransientBackendError(Exception):
    """Retryable failure (rate limit, 5xx, connection trouble)."""


class ChatBackend(Protocol):
    def complete(self, request: LlmRequest) -> str: ...


class HttpChatBackend:
    """Client for a /chat/completions endpoint."""

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        timeout: float = 120.0,
    ) -> None:
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.timeout = timeout

    def complete(self, request: LlmRequest) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(
                f"{self.base_url}/chat/completions",
                json={
                    "model": request.model,
                    "messages": [m.as_dict() for m in request.messages],
                    "temperature": request.temperature,
                    "top_p": request.top_p,
                },
                headers=headers,
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransientBackendError(str(exc)) from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientBackendError(f"HTTP {resp.status_code}")
        if resp.status_code != 200:
            raise ProviderUnavailable(f"chat endpoint returned HTTP {resp.status_code}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise ProviderUnavailable(f"malformed chat response: {exc}") from exc


class ScriptedBackend:
    """Test/recording backend: delegates to a function of the request."""

    def __init__(self, script: Callable[[LlmRequest], str]) -> None:
        self.script = script
        self.calls: list[LlmRequest] = []

    def complete(self, request: LlmRequest) -> str:
        self.calls.append(request)
        return self.script(request)


class RateLimiter:
    """Token bucket over requests per minute; gates live calls only."""

    def __init__(
        self,
        requests_per_minute: float,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.rate = requests_per_minute / 60.0
        self.capacity = max(1.0, requests_per_minute / 60.0)
        self._tokens = self.capacity
        self._last = clock()
        self._clock = clock
        self._sleep = sleep

    def acquire(self) -> None:
        now = self._clock()
        self._tokens = min(self.capacity, self._tokens + (now - self._last) * self.rate)
        self._last = now
        if self._tokens < 1.0:
            wait = (1.0 - self._tokens) / self.rate
            self._sleep(wait)
            self._tokens = 1.0
            self._last = self._clock()
        self._tokens -= 1.0


@dataclass
class RetryPolicy:
    attempts: int = 3
    backoff_base_s: float = 1.0


class Gateway:
    """Response-store-aware completion with retries.

    ``store_dir`` holds one ``<digest>.json`` per completed request.  With
    a backend, hits are served as provenance "cache" and misses recorded
    after a live call; without one, misses raise :class:`ReplayMiss` and
    hits carry provenance "replay".
    """

    def __init__(
        self,
        backend: ChatBackend | None = None,
        store_dir: str | Path | None = None,
        models: dict[str, str] | None = None,
        temperature: float = DEFAULT_TEMPERATURE,
        top_p: float = DEFAULT_TOP_P,
        retry: RetryPolicy | None = None,
        rate_limiter: RateLimiter | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if backend is None and store_dir is None:
            raise ValueError("gateway needs a backend, a response store, or both")
        self.backend = backend
        self.store_dir = Path(store_dir) if store_dir is not None else None
        self.models = dict(models or {})
        self.temperature = temperature
        self.top_p = top_p
        self.retry = retry or RetryPolicy()
        self.rate_limiter = rate_limiter
        self._sleep = sleep

    # -- store -----------------------------------------------------------
    def _store_path(self, key: str) -> Path:
        assert self.store_dir is not None
        return self.store_dir / f"{key}.json"

    def _store_get(self, key: str) -> str | None:
        if self.store_dir is None:
            return None
        path = self._store_path(key)
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))["text"]

    def _store_put(self, request: LlmRequest, text: str) -> None:
        if self.store_dir is None:
            return
        self.store_dir.mkdir(parents=True, exist_ok=True)
        record = {
            "model": request.model,
            "temperature": request.temperature,
            "top_p": request.top_p,
            "messages": [m.as_dict() for m in request.messages],
            "text": text,
        }
        path = self._store_path(request.cache_key)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(
            json.dumps(record, sort_keys=True, ensure_ascii=False, indent=1),
            encoding="utf-8",
        )
        os.replace(tmp, path)

    # -- completion ------------------------------------------------------
    def complete(self, request: LlmRequest) -> LlmResponse:
        cached = self._store_get(request.cache_key)
        if cached is not None:
            provenance = "replay" if self.backend is None else "cache"
            return LlmResponse(text=cached, provenance=provenance)
        if self.backend is None:
            raise ReplayMiss(
                f"no recorded response for digest {request.cache_key[:12]} "
                f"(model={request.model})"
            )
        text, latency_ms = self._complete_with_retries(request)
        self._store_put(request, text)
        return LlmResponse(text=text, provenance="live", latency_ms=latency_ms)

    def _complete_with_retries(self, request: LlmRequest) -> tuple[str, int]:
        last_error: Exception | None = None
        for attempt in range(self.retry.attempts):
            if self.rate_limiter is not None:
                self.rate_limiter.acquire()
            try:
                start = time.monotonic()
                text = self.backend.complete(request)  # type: ignore[union-attr]
                return text, int((time.monotonic() - start) * 1000)
            except TransientBackendError as exc:
                last_error = exc
                if attempt + 1 < self.retry.attempts:
                    self._sleep(self.retry.backoff_base_s * (2**attempt))
        raise ProviderUnavailable(
            f"backend failed after {self.retry.attempts} attempts: {last_error}"
        )

    def complete_for(self, role: str, messages: tuple[ChatMessage, ...]) -> LlmResponse:
        """Complete using the per-role configured model name."""
        model = self.models.get(role, self.models.get("default", "default"))
        return self.complete(
            LlmRequest(
                model=model,
                messages=messages,
                temperature=self.temperature,
                top_p=self.top_p,
            )
        )
