"""
Heat-Trace Signatures
Graph Hallucination Audit - LLM Graph Recall Benchmark

NetLSD heat-trace signatures over a log-spaced timescale grid and the
pairwise distances between them.
"""

import logging
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from graph_audit.config import SIGNATURE_LOG_MAX, SIGNATURE_LOG_MIN, SIGNATURE_POINTS
from graph_audit.core.graph import Graph, normalized_laplacian_spectrum
from graph_audit.exceptions import GraphSizeError, SignatureGridError

logger = logging.getLogger(__name__)

NORMALIZATIONS = ("none", "empty", "complete")


class HeatSignature(BaseModel):
    """Heat trace h(t) sampled on a timescale grid"""
    model_config = ConfigDict(frozen=True)

    timescales: Tuple[float, ...]
    values: Tuple[float, ...]
    normalization: str = "none"

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def default_timescales() -> np.ndarray:
    """250 log-spaced timescales over [1e-2, 1e2]"""
    return np.logspace(SIGNATURE_LOG_MIN, SIGNATURE_LOG_MAX, SIGNATURE_POINTS)


def heat_trace_signature(g: Graph, normalization: str = "none") -> HeatSignature:
    """
    Heat-trace signature h(t) = sum_i exp(-lambda_i t)

    Args:
        g: Graph with at least one node
        normalization: "none", "empty" (divide by n) or "complete"
            (divide by the heat trace of the complete graph on n nodes)

    Raises:
        GraphSizeError: for the empty graph
    """
    if g.n == 0:
        raise GraphSizeError("Heat-trace signature needs at least one node")
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"Unknown normalization '{normalization}', expected one of {NORMALIZATIONS}")

    timescales = default_timescales()
    eigenvalues = normalized_laplacian_spectrum(g)
    values = np.exp(-np.outer(timescales, eigenvalues)).sum(axis=1)

    if normalization == "empty":
        values = values / g.n
    elif normalization == "complete":
        if g.n > 1:
            values = values / (1 + (g.n - 1) * np.exp(-timescales * g.n / (g.n - 1)))

    return HeatSignature(
        timescales=tuple(float(t) for t in timescales),
        values=tuple(float(v) for v in values),
        normalization=normalization,
    )


def signature_distance(a: HeatSignature, b: HeatSignature) -> float:
    """
    l2 distance between two signatures

    Raises:
        SignatureGridError: when the timescale grids differ
    """
    if a.timescales != b.timescales:
        raise SignatureGridError(
            f"Signature grids differ ({len(a.timescales)} vs {len(b.timescales)} timescales)"
        )
    return float(np.linalg.norm(a.as_array() - b.as_array()))


def signature_distance_matrix(signatures: Dict[str, HeatSignature]) -> Tuple[List[str], np.ndarray]:
    """Pairwise distances with rows and columns in the given key order"""
    names = list(signatures)
    matrix = np.zeros((len(names), len(names)))
    for i, j in zip(*np.triu_indices(len(names), k=1)):
        d = signature_distance(signatures[names[i]], signatures[names[j]])
        matrix[i, j] = matrix[j, i] = d
    logger.debug(f"Computed {len(names)}x{len(names)} signature distance matrix")
    return names, matrix
