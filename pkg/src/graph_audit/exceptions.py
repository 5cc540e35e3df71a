"""
Exception Types
Graph Hallucination Audit - LLM Graph Recall Benchmark
"""

from typing import Iterable, Set


class UnknownGraphError(KeyError):
    """Raised when a catalog key is not bundled"""

    def __init__(self, name: str, available: Iterable[str]):
        self.name = name
        self.available = sorted(available)
        super().__init__(f"Unknown graph '{name}'. Available: {', '.join(self.available)}")

    def __str__(self) -> str:
        return self.args[0]


class AtlasResolutionError(ValueError):
    """Raised when an atlas resolution is outside the bundled range"""


class GraphSizeError(ValueError):
    """Raised when a graph is too large (or empty) for the requested operation"""


class AlignmentError(ValueError):
    """Raised when a label alignment is not injective"""


class KeySetMismatchError(ValueError):
    """Raised when two keyed collections do not cover the same keys"""

    def __init__(self, left: Iterable, right: Iterable, what: str = "keys"):
        left_set: Set = set(left)
        right_set: Set = set(right)
        self.only_left = sorted(left_set - right_set, key=str)
        self.only_right = sorted(right_set - left_set, key=str)
        super().__init__(
            f"Mismatched {what}: only in first {self.only_left}, only in second {self.only_right}"
        )


class SignatureGridError(ValueError):
    """Raised when two signatures use different timescale grids"""


class ConfigError(ValueError):
    """Raised when a run configuration cannot be read or validated"""


class LLMClientError(Exception):
    """Base error for endpoint communication"""


class AuthenticationError(LLMClientError):
    """Raised on 401/403 replies or a missing API key"""


class RetriesExhaustedError(LLMClientError):
    """Raised when every retry attempt failed"""

    def __init__(self, message: str, attempts: int):
        self.attempts = attempts
        super().__init__(message)


class MalformedResponseError(LLMClientError):
    """Raised when the endpoint reply has no message content"""


class TranscriptNotFoundError(LookupError):
    """Raised when replay mode finds no stored transcript"""
