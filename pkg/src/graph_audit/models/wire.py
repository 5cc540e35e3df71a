"""
Chat-Completions Wire Models
Graph Hallucination Audit - LLM Graph Recall Benchmark
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, Field


class ChatMessage(BaseModel):
    """One chat message"""
    role: Literal["system", "user", "assistant"]
    content: str


class ChatRequest(BaseModel):
    """Request body for POST /chat/completions"""
    model: str
    messages: List[ChatMessage] = Field(..., min_length=1)
    temperature: Optional[float] = None
    max_tokens: Optional[int] = None

    @property
    def prompt(self) -> str:
        """Content of the last user message"""
        for message in reversed(self.messages):
            if message.role == "user":
                return message.content
        return ""


class ChatChoice(BaseModel):
    index: int = 0
    message: ChatMessage
    finish_reason: str = "stop"


class ChatCompletionResponse(BaseModel):
    """Response body for POST /chat/completions"""
    id: str
    object: str = "chat.completion"
    model: str
    choices: List[ChatChoice]


class HealthResponse(BaseModel):
    """Response model for the health check"""
    status: str
    transcripts: int = Field(..., description="Number of transcripts available for replay")
