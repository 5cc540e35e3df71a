"""
LLM Endpoint Client
Graph Hallucination Audit - LLM Graph Recall Benchmark

Sends single-message chat-completion requests, with transcript caching,
per-endpoint request spacing, exponential backoff and an offline replay mode.
"""

import logging
import os
import threading
import time
from datetime import datetime, timezone
from typing import Any, Callable, Dict, Optional

import requests
from dotenv import load_dotenv
from pydantic import BaseModel

from graph_audit.client.transcript_store import TranscriptStore, cache_key
from graph_audit.config import (
    ATLAS_PROMPT_TEMPLATE,
    NAMED_PROMPT_TEMPLATE,
    RETRY_BACKOFF_BASE,
    RETRY_BACKOFF_FACTOR,
    RETRYABLE_STATUS_CODES,
)
from graph_audit.core.ground_truth import catalog_path, parse_atlas_key, prompt_name
from graph_audit.exceptions import (
    AuthenticationError,
    LLMClientError,
    MalformedResponseError,
    RetriesExhaustedError,
    TranscriptNotFoundError,
)
from graph_audit.models.records import EndpointConfig, Transcript
from graph_audit.models.wire import ChatMessage, ChatRequest

logger = logging.getLogger(__name__)

__all__ = ["PromptTemplate", "render_prompt", "cache_key", "RateLimiter", "LLMClient", "fetch"]

# Transient failures retried like throttling replies
TRANSPORT_ERRORS = (
    requests.exceptions.ConnectionError,
    requests.exceptions.Timeout,
    requests.exceptions.ChunkedEncodingError,
    requests.exceptions.ContentDecodingError,
)


class PromptTemplate(BaseModel):
    """Prompt text with one placeholder"""
    template: str

    def render(self, **values: Any) -> str:
        return self.template.format(**values)


NAMED_PROMPT = PromptTemplate(template=NAMED_PROMPT_TEMPLATE)
ATLAS_PROMPT = PromptTemplate(template=ATLAS_PROMPT_TEMPLATE)


def render_prompt(target: str) -> str:
    """
    Prompt asking for a catalog graph

    Args:
        target: "karate", "lesmis" or "atlas:<index>"

    Raises:
        UnknownGraphError: for targets outside the catalog
    """
    catalog_path(target)
    index = parse_atlas_key(target)
    if index is not None:
        return ATLAS_PROMPT.render(index=index)
    return NAMED_PROMPT.render(name=prompt_name(target))


class RateLimiter:
    """Keeps a minimum spacing between requests to the same base URL"""

    def __init__(self, clock: Callable[[], float] = time.monotonic, sleep: Callable[[float], None] = time.sleep):
        self._clock = clock
        self._sleep = sleep
        self._last: Dict[str, float] = {}
        self._locks: Dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def _lock_for(self, key: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())

    def wait(self, key: str, interval: float) -> float:
        """
        Block until `interval` seconds have passed since the last call for `key`

        Returns:
            Seconds slept
        """
        with self._lock_for(key):
            slept = 0.0
            last = self._last.get(key)
            if last is not None and interval > 0:
                remaining = interval - (self._clock() - last)
                if remaining > 0:
                    self._sleep(remaining)
                    slept = remaining
            self._last[key] = self._clock()
            return slept


_default_limiter = RateLimiter()


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class LLMClient:
    """Chat-completions client for one configured endpoint"""

    def __init__(
        self,
        config: EndpointConfig,
        store: Optional[TranscriptStore] = None,
        replay: bool = False,
        session: Optional[requests.Session] = None,
        sleep: Callable[[float], None] = time.sleep,
        limiter: Optional[RateLimiter] = None,
    ):
        """
        Initialize the client

        Args:
            config: Endpoint settings
            store: Transcript cache; fetched transcripts are appended to it
            replay: Serve only from the store, never touching the network
            session: HTTP session (a fresh one by default)
            sleep: Backoff sleep function
            limiter: Request spacing registry shared across clients
        """
        self.config = config
        self.store = store
        self.replay = replay
        self.session = session or requests.Session()
        self._sleep = sleep
        self.limiter = limiter or _default_limiter
        self.stats = {
            'requests': 0,
            'retries': 0,
            'cache_hits': 0,
            'last_retries': 0,
        }
        load_dotenv()

    def _api_key(self) -> str:
        key = os.environ.get(self.config.api_key_env_name)
        if not key:
            raise AuthenticationError(
                f"Environment variable {self.config.api_key_env_name} is not set for model {self.config.model_id}"
            )
        return key

    def _payload(self, prompt: str) -> Dict[str, Any]:
        request = ChatRequest(
            model=self.config.model_id,
            messages=[ChatMessage(role="user", content=prompt)],
            temperature=self.config.temperature,
            max_tokens=self.config.max_tokens,
        )
        return request.model_dump(exclude_none=True)

    @staticmethod
    def _content(body: Any) -> str:
        try:
            content = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise MalformedResponseError("Endpoint reply has no choices[0].message.content")
        if not isinstance(content, str):
            raise MalformedResponseError("Endpoint reply content is not a string")
        return content

    def _backoff(self, attempt: int) -> float:
        return RETRY_BACKOFF_BASE * RETRY_BACKOFF_FACTOR ** attempt

    def _post(self, prompt: str) -> str:
        """Send the request, retrying transport errors and throttling replies"""
        url = f"{self.config.base_url}/chat/completions"
        headers = {"Authorization": f"Bearer {self._api_key()}"}
        payload = self._payload(prompt)
        last_problem = ""

        for attempt in range(self.config.max_retries + 1):
            self.limiter.wait(self.config.base_url, self.config.min_request_interval)
            self.stats['requests'] += 1
            try:
                response = self.session.post(url, json=payload, headers=headers, timeout=self.config.request_timeout)
            except TRANSPORT_ERRORS as e:
                last_problem = f"{type(e).__name__}: {e}"
                logger.warning(f"{self.config.model_id} attempt {attempt + 1}: transport error")
            except requests.exceptions.RequestException as e:
                raise LLMClientError(f"Request to {self.config.base_url} failed: {type(e).__name__}: {e}")
            else:
                status = response.status_code
                logger.debug(f"{self.config.model_id} attempt {attempt + 1}: HTTP {status}")
                if status in (401, 403):
                    raise AuthenticationError(f"Endpoint {self.config.base_url} rejected credentials (HTTP {status})")
                if status == 200:
                    try:
                        body = response.json()
                    except ValueError:
                        raise MalformedResponseError("Endpoint reply is not JSON")
                    return self._content(body)
                if status not in RETRYABLE_STATUS_CODES:
                    raise LLMClientError(f"Endpoint {self.config.base_url} answered HTTP {status}")
                last_problem = f"HTTP {status}"
                logger.warning(f"{self.config.model_id} attempt {attempt + 1}: throttled ({last_problem})")

            if attempt < self.config.max_retries:
                self.stats['retries'] += 1
                self.stats['last_retries'] += 1
                self._sleep(self._backoff(attempt))

        raise RetriesExhaustedError(
            f"Gave up on {self.config.model_id} after {self.config.max_retries + 1} attempts ({last_problem})",
            attempts=self.config.max_retries + 1,
        )

    def fetch(self, prompt: str) -> Transcript:
        """
        Fetch one response

        Cached pairs come back from the store marked as replayed, keeping
        their original fetch time.

        Args:
            prompt: Single user message

        Returns:
            Transcript with the response text exactly as received
        """
        self.stats['last_retries'] = 0
        key = cache_key(self.config.model_id, prompt)

        if self.store is not None:
            cached = self.store.get(key)
            if cached is not None:
                self.stats['cache_hits'] += 1
                logger.info(f"Cache hit for {self.config.model_id}")
                return cached.model_copy(update={"source": "replay"})

        if self.replay:
            raise TranscriptNotFoundError(f"No stored transcript for model {self.config.model_id} and this prompt")

        text = self._post(prompt)
        transcript = Transcript(
            model_id=self.config.model_id,
            prompt=prompt,
            response_text=text,
            fetched_at=_utc_now(),
            source="live",
        )
        if self.store is not None:
            self.store.append(key, transcript)
        logger.info(f"Fetched {len(text)} characters from {self.config.model_id}")
        return transcript


def fetch(
    cfg: EndpointConfig,
    prompt: str,
    store: Optional[TranscriptStore] = None,
    replay: bool = False,
    **client_options: Any,
) -> Transcript:
    """One-off fetch through a temporary client"""
    return LLMClient(cfg, store=store, replay=replay, **client_options).fetch(prompt)
