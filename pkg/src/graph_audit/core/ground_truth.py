"""
Ground-Truth Catalog
Graph Hallucination Audit - LLM Graph Recall Benchmark

Bundled reference graphs (karate club, Les Misérables, graph atlas entries)
and atlas selection for the Graph Atlas Distance.
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import List, Optional

from graph_audit.config import (
    ATLAS_DIR,
    ATLAS_KEY_PREFIX,
    BUNDLED_ATLAS_INDICES,
    GAD_MAX_RESOLUTION,
    GROUND_TRUTH_DIR,
    NAMED_GRAPHS,
)
from graph_audit.core.graph import Graph, connected_components, from_edge_list, read_edge_list
from graph_audit.exceptions import AtlasResolutionError, UnknownGraphError

logger = logging.getLogger(__name__)


def catalog_keys() -> List[str]:
    """Every loadable key, named graphs first then atlas entries"""
    return list(NAMED_GRAPHS) + [atlas_key(i) for i in BUNDLED_ATLAS_INDICES]


def atlas_key(index: int) -> str:
    return f"{ATLAS_KEY_PREFIX}{index}"


def parse_atlas_key(name: str) -> Optional[int]:
    """Atlas index encoded in a key, or None for non-atlas keys"""
    if not name.startswith(ATLAS_KEY_PREFIX):
        return None
    try:
        return int(name[len(ATLAS_KEY_PREFIX):])
    except ValueError:
        return None


def catalog_path(name: str) -> Path:
    """Data file backing a catalog key"""
    if name in NAMED_GRAPHS:
        return GROUND_TRUTH_DIR / f"{name}.edges"
    index = parse_atlas_key(name)
    if index is not None and index in BUNDLED_ATLAS_INDICES:
        return ATLAS_DIR / f"{index}.edges"
    raise UnknownGraphError(name, catalog_keys())


def prompt_name(name: str) -> str:
    """Name a graph is asked for by in prompts"""
    if name not in NAMED_GRAPHS:
        raise UnknownGraphError(name, list(NAMED_GRAPHS))
    return NAMED_GRAPHS[name]


@lru_cache(maxsize=None)
def load_ground_truth(name: str) -> Graph:
    """
    Load a bundled reference graph

    Args:
        name: "karate", "lesmis" or "atlas:<index>"

    Returns:
        Graph whose labels are the file labels
    """
    path = catalog_path(name)
    graph, _, report = from_edge_list(read_edge_list(path))
    if report.duplicate_edges or report.self_loops:
        logger.warning(f"Ground truth {name} is not simple: {report}")
    logger.debug(f"Loaded {name}: {graph.n} nodes, {graph.edge_count} edges")
    return graph


def is_connected_atlas_graph(index: int) -> bool:
    """Whether a bundled atlas graph has at least two nodes and one component"""
    graph = load_ground_truth(atlas_key(index))
    return graph.n > 1 and len(connected_components(graph)) == 1


def atlas_selection(resolution: int) -> List[int]:
    """
    First `resolution` connected atlas graphs in atlas order

    Args:
        resolution: How many atlas graphs to use, 1..5

    Returns:
        Atlas indices, e.g. [3, 6, 7, 13, 15] for 5
    """
    if not 1 <= resolution <= GAD_MAX_RESOLUTION:
        raise AtlasResolutionError(f"Resolution must be between 1 and {GAD_MAX_RESOLUTION}, got {resolution}")
    connected = [i for i in sorted(BUNDLED_ATLAS_INDICES) if is_connected_atlas_graph(i)]
    if len(connected) < resolution:
        raise AtlasResolutionError(f"Only {len(connected)} connected atlas graphs are bundled, need {resolution}")
    return connected[:resolution]
