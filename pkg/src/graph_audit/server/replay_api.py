"""
Replay Endpoint
Graph Hallucination Audit - LLM Graph Recall Benchmark

FastAPI app speaking the chat-completions protocol, answering every request
from a transcript store. Used as an offline stand-in for hosted models and
as the stub server for live-fetch tests.
"""

import logging
import threading
from typing import Optional

from fastapi import FastAPI, Header, HTTPException
from fastapi.responses import JSONResponse

from graph_audit import __version__
from graph_audit.client.transcript_store import TranscriptStore, cache_key
from graph_audit.models.wire import ChatChoice, ChatCompletionResponse, ChatMessage, ChatRequest, HealthResponse

logger = logging.getLogger(__name__)


def create_app(store: TranscriptStore, throttle_first: int = 0, api_key: Optional[str] = None) -> FastAPI:
    """
    Build the replay app

    Args:
        store: Transcripts to serve
        throttle_first: Answer this many initial completion requests with HTTP 429
        api_key: Bearer token required on requests; None accepts any

    Returns:
        FastAPI application
    """
    app = FastAPI(
        title="Graph Audit Replay Endpoint",
        description="Serves stored transcripts over the chat-completions protocol",
        version=__version__,
    )
    app.state.store = store
    app.state.throttle_remaining = throttle_first
    app.state.requests_seen = 0
    counter_lock = threading.Lock()

    @app.get("/health", response_model=HealthResponse)
    def health_check():
        """Report how many transcripts can be replayed"""
        return HealthResponse(status="healthy", transcripts=len(store))

    @app.post("/chat/completions", response_model=ChatCompletionResponse)
    def chat_completions(request: ChatRequest, authorization: Optional[str] = Header(None)):
        """Replay the stored response for (model, last user message)"""
        with counter_lock:
            app.state.requests_seen += 1
            throttled = app.state.throttle_remaining > 0
            if throttled:
                app.state.throttle_remaining -= 1

        if api_key is not None and authorization != f"Bearer {api_key}":
            raise HTTPException(status_code=401, detail="Invalid API key")
        if throttled:
            logger.info("Injecting throttle response")
            return JSONResponse(status_code=429, content={"detail": "Rate limit exceeded"})

        key = cache_key(request.model, request.prompt)
        transcript = store.get(key)
        if transcript is None:
            raise HTTPException(status_code=404, detail=f"No transcript for model '{request.model}' and this prompt")

        return ChatCompletionResponse(
            id=f"replay-{key[:16]}",
            model=request.model,
            choices=[ChatChoice(message=ChatMessage(role="assistant", content=transcript.response_text))],
        )

    return app
