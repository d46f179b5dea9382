"""Molecule-proposer backends behind one contract.

RemoteChatProposer speaks the chat-completions wire shape against any
compatible endpoint, with retry/backoff, a token-bucket rate limiter,
and a concurrent-request cap. ScriptedProposer replays canned
responses (or a rule table) for deterministic tests and benchmarks.
CachedProposer wraps another proposer with a content-addressed disk
cache so benchmark reruns never re-issue identical requests.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import tempfile
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import requests

from .exceptions import ConfigurationError


@dataclass(frozen=True)
class ProposerRequest:
    system: str
    messages: list[dict[str, str]]
    temperature: float = 0.0
    max_tokens: int = 128


@dataclass(frozen=True)
class ProposerResponse:
    text: str
    prompt_tokens: int | None = None
    completion_tokens: int | None = None
    latency: float = 0.0
    attempts: int = 1
    cached: bool = False


class ProposerError(Exception):
    """Unrecoverable proposer failure (bad request, empty content)."""


class TransportError(ProposerError):
    """Exhausted retries against the remote endpoint."""


class ScenarioUnderrun(Exception):
    """A scripted scenario ran out of responses: a test bug, never
    silently repeated."""


@dataclass(frozen=True)
class RemoteChatConfig:
    base_url: str
    model: str
    temperature: float = 0.0
    max_tokens: int = 128
    timeout: float = 60.0
    max_attempts: int = 3
    backoff_base: float = 1.0
    api_key_env: str = "MOLREFINE_API_KEY"
    rate_limit_rps: float | None = None
    max_concurrent: int = 8

    def __post_init__(self) -> None:
        if not self.base_url:
            raise ConfigurationError("remote proposer needs a base_url")
        if self.max_attempts < 1:
            raise ConfigurationError("max_attempts must be >= 1")
        if self.temperature < 0:
            raise ConfigurationError("temperature must be >= 0")


class RateLimiter:
    """Token bucket; acquire() blocks until a slot is available."""

    def __init__(self, rps: float) -> None:
        self._interval = 1.0 / rps
        self._lock = threading.Lock()
        self._next_at = 0.0

    def acquire(self) -> None:
        with self._lock:
            now = time.monotonic()
            wait = self._next_at - now
            self._next_at = max(self._next_at, now) + self._interval
        if wait > 0:
            time.sleep(wait)


class ScriptedProposer:
    """Deterministic proposer for tests and offline benchmarks.

    Either an ordered response list (each propose() consumes one) or a
    rule table of (substring-of-last-user-message, response) pairs.
    """

    def __init__(
        self,
        responses: list[str] | None = None,
        rules: list[tuple[str, str]] | None = None,
    ) -> None:
        if (responses is None) == (rules is None):
            raise ConfigurationError("scripted proposer takes responses or rules")
        self._responses = list(responses) if responses is not None else None
        self._rules = list(rules) if rules is not None else None
        self._index = 0
        self._lock = threading.Lock()

    def propose(self, request: ProposerRequest) -> ProposerResponse:
        if self._responses is not None:
            with self._lock:
                if self._index >= len(self._responses):
                    raise ScenarioUnderrun(
                        f"scripted scenario exhausted after {self._index} responses"
                    )
                text = self._responses[self._index]
                self._index += 1
        else:
            last_user = next(
                (m["content"] for m in reversed(request.messages) if m["role"] == "user"),
                "",
            )
            text = None
            for needle, response in self._rules:
                if needle in last_user:
                    text = response
                    break
            if text is None:
                raise ScenarioUnderrun(
                    f"no scripted rule matches prompt: {last_user[:80]!r}"
                )
        if not text:
            raise ProposerError("scripted response is empty")
        return ProposerResponse(text=text, latency=0.0)


class RemoteChatProposer:
    def __init__(self, config: RemoteChatConfig, session: requests.Session | None = None) -> None:
        self.config = config
        self._fixed_session = session
        self._local = threading.local()
        self._limiter = (
            RateLimiter(config.rate_limit_rps) if config.rate_limit_rps else None
        )
        self._slots = threading.Semaphore(config.max_concurrent)

    @property
    def _session(self) -> requests.Session:
        # Sessions are not guaranteed thread-safe; keep one per thread.
        if self._fixed_session is not None:
            return self._fixed_session
        session = getattr(self._local, "session", None)
        if session is None:
            session = requests.Session()
            self._local.session = session
        return session

    def _headers(self) -> dict[str, str]:
        key = os.environ.get(self.config.api_key_env, "")
        if not key:
            raise ProposerError(
                f"API key environment variable {self.config.api_key_env!r} is not set"
            )
        return {"Authorization": f"Bearer {key}", "Content-Type": "application/json"}

    def propose(self, request: ProposerRequest) -> ProposerResponse:
        messages = list(request.messages)
        if request.system:
            messages = [{"role": "system", "content": request.system}] + messages
        body = {
            "model": self.config.model,
            "messages": messages,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        headers = self._headers()
        start = time.monotonic()
        last_error = ""
        with self._slots:
            for attempt in range(1, self.config.max_attempts + 1):
                if self._limiter is not None:
                    self._limiter.acquire()
                try:
                    resp = self._session.post(
                        url, json=body, headers=headers, timeout=self.config.timeout
                    )
                except requests.RequestException as exc:
                    last_error = f"transport: {exc}"
                else:
                    if resp.status_code == 200:
                        return self._parse_success(resp, attempt, start)
                    if resp.status_code == 429 or resp.status_code >= 500:
                        last_error = f"HTTP {resp.status_code}"
                    else:
                        raise ProposerError(
                            f"HTTP {resp.status_code}: {resp.text[:200]}"
                        )
                if attempt < self.config.max_attempts:
                    delay = self.config.backoff_base * (2 ** (attempt - 1))
                    time.sleep(delay * (1.0 + random.random() * 0.25))
        raise TransportError(
            f"giving up after {self.config.max_attempts} attempts ({last_error})"
        )

    def _parse_success(self, resp, attempts: int, start: float) -> ProposerResponse:
        try:
            payload = resp.json()
            content = payload["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError) as exc:
            raise ProposerError(f"malformed completion payload: {exc}") from exc
        if not content or not content.strip():
            raise ProposerError("completion content is empty")
        usage = payload.get("usage") or {}
        return ProposerResponse(
            text=content,
            prompt_tokens=usage.get("prompt_tokens"),
            completion_tokens=usage.get("completion_tokens"),
            latency=time.monotonic() - start,
            attempts=attempts,
        )


class CachedProposer:
    """Content-addressed disk cache over another proposer.

    One file per key; writes go through a temp file and an atomic
    replace, so concurrent writers of the same key are safe.
    """

    def __init__(self, inner, cache_dir: str | Path) -> None:
        self._inner = inner
        self._dir = Path(cache_dir)
        self._dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def cache_key(model: str, request: ProposerRequest) -> str:
        canonical = json.dumps(
            {
                "model": model,
                "system": request.system,
                "messages": request.messages,
                "temperature": request.temperature,
                "max_tokens": request.max_tokens,
            },
            sort_keys=True,
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def _model_name(self) -> str:
        config = getattr(self._inner, "config", None)
        return getattr(config, "model", "") if config else ""

    def propose(self, request: ProposerRequest) -> ProposerResponse:
        key = self.cache_key(self._model_name(), request)
        path = self._dir / f"{key}.json"
        if path.exists():
            stored = json.loads(path.read_text())
            return ProposerResponse(
                text=stored["text"],
                prompt_tokens=stored.get("prompt_tokens"),
                completion_tokens=stored.get("completion_tokens"),
                latency=0.0,
                attempts=0,
                cached=True,
            )
        response = self._inner.propose(request)
        payload = {
            "text": response.text,
            "prompt_tokens": response.prompt_tokens,
            "completion_tokens": response.completion_tokens,
        }
        fd, tmp = tempfile.mkstemp(dir=self._dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return response


def load_scripted_file(path: str | Path) -> dict:
    data = json.loads(Path(path).read_text())
    if "responses" not in data and "rules" not in data:
        raise ConfigurationError(f"{path} must hold 'responses' or 'rules'")
    return data


def make_scripted_factory(path: str | Path):
    """Each call yields a fresh scripted proposer, so concurrent loops
    never interleave one ordered scenario."""
    data = load_scripted_file(path)

    def factory() -> ScriptedProposer:
        if "responses" in data:
            return ScriptedProposer(responses=list(data["responses"]))
        return ScriptedProposer(rules=[(r["contains"], r["response"]) for r in data["rules"]])

    return factory


def build_proposer_factory(config: dict, cache_dir: str | Path | None = None):
    """Factory from a proposer config mapping (see BenchConfig docs)."""
    kind = config.get("kind")
    if kind == "scripted":
        path = config.get("path")
        if not path:
            raise ConfigurationError("scripted proposer config needs 'path'")
        return make_scripted_factory(path)
    if kind == "remote_chat":
        remote = RemoteChatConfig(
            base_url=config.get("base_url", ""),
            model=config.get("model", ""),
            temperature=config.get("temperature", 0.0),
            max_tokens=config.get("max_tokens", 128),
            timeout=config.get("timeout", 60.0),
            max_attempts=config.get("max_attempts", 3),
            backoff_base=config.get("backoff_base", 1.0),
            api_key_env=config.get("api_key_env", "MOLREFINE_API_KEY"),
            rate_limit_rps=config.get("rate_limit_rps"),
            max_concurrent=config.get("max_concurrent", 8),
        )
        shared = RemoteChatProposer(remote)
        effective_cache = config.get("cache_dir", cache_dir)
        if effective_cache:
            shared = CachedProposer(shared, effective_cache)

        def factory():
            return shared

        return factory
    raise ConfigurationError(f"unknown proposer kind {kind!r}")
