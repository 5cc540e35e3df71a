"""
Pydantic Record Models
Graph Hallucination Audit - LLM Graph Recall Benchmark

Transcripts, parse results, metric rows, distance results, run manifests
and the run configuration.
"""

import hashlib
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from graph_audit.config import (
    DEFAULT_CODE_PATTERNS,
    DEFAULT_GED_BUDGET,
    DEFAULT_REFUSAL_CUES,
    DEFAULT_SEED,
    SPECTRAL_MATRIX,
    STD_CONVENTION,
)
from graph_audit.exceptions import ConfigError

logger = logging.getLogger(__name__)

LabeledEdge = Tuple[str, str]


# ============================================================
# Transcripts and parsing
# ============================================================

class Transcript(BaseModel):
    """One model/prompt/response record"""
    model_config = ConfigDict(protected_namespaces=(), frozen=True)

    model_id: str
    prompt: str
    response_text: str
    fetched_at: str = Field(..., description="ISO-8601 UTC timestamp of the original fetch")
    source: Literal["live", "replay"]


class Classification(str, Enum):
    """What kind of content a response holds"""
    EDGE_LIST = "EdgeList"
    REFUSAL = "Refusal"
    CODE_ONLY = "CodeOnly"
    EMPTY = "Empty"


WarningKind = Literal["duplicate", "self_loop", "truncated_tail", "mixed_label_types", "multiple_lists"]


class ParseWarning(BaseModel):
    """A counted anomaly found while parsing"""
    kind: WarningKind
    count: int = Field(..., ge=1)


class ParseResult(BaseModel):
    """Edge list extracted from a response"""
    classification: Classification
    edges: List[LabeledEdge] = Field(default_factory=list)
    warnings: List[ParseWarning] = Field(default_factory=list)

    @model_validator(mode="after")
    def edges_match_classification(self) -> "ParseResult":
        if bool(self.edges) != (self.classification == Classification.EDGE_LIST):
            raise ValueError("edges must be nonempty exactly when classification is EdgeList")
        return self

    def warning_count(self, kind: str) -> int:
        """Count recorded for a warning kind (0 if absent)"""
        return sum(w.count for w in self.warnings if w.kind == kind)

    @property
    def labels(self) -> List[str]:
        """Distinct labels in first-appearance order"""
        seen: Dict[str, None] = {}
        for a, b in self.edges:
            seen.setdefault(a, None)
            seen.setdefault(b, None)
        return list(seen)


# ============================================================
# Analysis results
# ============================================================

class MetricsRecord(BaseModel):
    """One row of a graph statistics table"""
    name: str
    node_count: int
    edge_count: int
    density: float
    assortativity: Optional[float] = None
    modularity: Optional[float] = None
    degseq_distance: float = 0.0


class GedResult(BaseModel):
    """Outcome of a graph edit distance search"""
    distance: int = Field(..., ge=0)
    exact: bool
    explored_nodes: int = 0
    mapping: Optional[Dict[int, int]] = Field(
        None, description="Witness correspondence from first-graph ids to second-graph ids"
    )


class GadScore(BaseModel):
    """Graph Atlas Distance of one model"""
    model_config = ConfigDict(protected_namespaces=())

    model_id: Optional[str] = None
    resolution: int
    per_graph: Dict[int, GedResult]
    isomorphic: Dict[int, bool] = Field(default_factory=dict)
    mean: float
    std: float
    std_convention: str = STD_CONVENTION

    @property
    def exact(self) -> bool:
        return all(r.exact for r in self.per_graph.values())


class DiffReport(BaseModel):
    """Edge-level comparison of an output graph against a reference"""
    intersection: List[LabeledEdge]
    added: List[LabeledEdge]
    missing: List[LabeledEdge]
    alignment: Dict[str, str]
    shift: int = 0


class RankingEntry(BaseModel):
    """One ranked model"""
    model_config = ConfigDict(protected_namespaces=())

    rank: int
    model_id: str
    mean: float
    std: float
    exact: bool


class RankingTable(BaseModel):
    """Models ordered by GAD mean, ties by model id"""
    entries: List[RankingEntry] = Field(default_factory=list)
    excluded: Dict[str, str] = Field(default_factory=dict)
    reference: Optional[List[str]] = None
    spearman: Optional[float] = None

    @property
    def model_ids(self) -> List[str]:
        return [e.model_id for e in self.entries]


# ============================================================
# Configuration
# ============================================================

class EndpointConfig(BaseModel):
    """Chat-completions endpoint serving one model"""
    model_config = ConfigDict(protected_namespaces=())

    base_url: str
    model_id: str
    api_key_env_name: str = "OPENAI_API_KEY"
    temperature: Optional[float] = None
    max_tokens: Optional[int] = Field(None, ge=1)
    request_timeout: float = Field(60.0, gt=0)
    max_retries: int = Field(3, ge=0)
    min_request_interval: float = Field(0.0, ge=0)

    @field_validator("base_url")
    @classmethod
    def base_url_is_absolute(cls, value: str) -> str:
        if not value.startswith(("http://", "https://")):
            raise ValueError(f"base_url must be an absolute http(s) URL, got '{value}'")
        return value.rstrip("/")


class ParserConfig(BaseModel):
    """Cue lists used to classify unusable responses"""
    refusal_cues: List[str] = Field(default_factory=lambda: list(DEFAULT_REFUSAL_CUES))
    code_patterns: List[str] = Field(default_factory=lambda: list(DEFAULT_CODE_PATTERNS))


class SignatureConfig(BaseModel):
    """Heat-trace signature options"""
    normalization: Literal["none", "empty", "complete"] = "none"


class AuditConfig(BaseModel):
    """Complete run configuration"""
    seed: int = DEFAULT_SEED
    endpoints: List[EndpointConfig] = Field(default_factory=list)
    parser: ParserConfig = Field(default_factory=ParserConfig)
    signatures: SignatureConfig = Field(default_factory=SignatureConfig)
    ged_budget: int = Field(DEFAULT_GED_BUDGET, ge=1)
    spectral_matrix: Literal["adjacency"] = SPECTRAL_MATRIX

    @classmethod
    def from_yaml(cls, path: Optional[Union[str, Path]] = None) -> "AuditConfig":
        """
        Load and validate a YAML run configuration

        Args:
            path: YAML file; None returns the defaults

        Returns:
            Validated AuditConfig
        """
        if path is None:
            return cls()

        path = Path(path)
        try:
            with open(path, "r", encoding="utf-8") as f:
                raw = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Cannot read config {path}: {e}") from e

        if not isinstance(raw, dict):
            raise ConfigError(f"Config {path} must contain a mapping at top level")

        try:
            config = cls.model_validate(raw)
        except ValidationError as e:
            raise ConfigError(f"Invalid config {path}: {e}") from e

        logger.info(f"Loaded run config from {path} ({len(config.endpoints)} endpoints)")
        return config

    def endpoint_for(self, model_id: str) -> Optional[EndpointConfig]:
        """Endpoint configured for a model, if any"""
        for endpoint in self.endpoints:
            if endpoint.model_id == model_id:
                return endpoint
        return None


# ============================================================
# Run manifest
# ============================================================

class ManifestEntry(BaseModel):
    """Outcome of fetching one (model, target) pair"""
    model_config = ConfigDict(protected_namespaces=())

    model_id: str
    target: str
    cache_key: Optional[str] = None
    classification: Optional[Classification] = None
    status: Literal["ok", "error"] = "ok"
    error: Optional[str] = None
    cached: bool = False
    retries: int = 0


class RunManifest(BaseModel):
    """Record of everything fetched into a transcript store"""
    toolkit_version: str
    seed: int
    config_snapshot: Dict = Field(default_factory=dict)
    targets: List[str] = Field(default_factory=list)
    entries: List[ManifestEntry] = Field(default_factory=list)
    new_fetches: int = 0

    def merge(self, entries: List[ManifestEntry]) -> None:
        """Add entries, replacing earlier ones for the same (model, target)"""
        by_key = {(e.model_id, e.target): e for e in self.entries}
        for entry in entries:
            by_key[(entry.model_id, entry.target)] = entry
        self.entries = [by_key[k] for k in sorted(by_key)]
        self.targets = sorted({e.target for e in self.entries})

    def entry(self, model_id: str, target: str) -> Optional[ManifestEntry]:
        for e in self.entries:
            if e.model_id == model_id and e.target == target:
                return e
        return None

    @property
    def model_ids(self) -> List[str]:
        return sorted({e.model_id for e in self.entries})

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form"""
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()
