"""
Graph Statistics
Graph Hallucination Audit - LLM Graph Recall Benchmark

Density, degree assortativity, seeded label propagation, modularity and the
degree-sequence distance used to sort statistics tables.
"""

import logging
import warnings
from collections import Counter
from typing import List, Optional, Sequence

import networkx as nx
import numpy as np

from graph_audit.config import LABEL_PROPAGATION_MAX_SWEEPS
from graph_audit.core.graph import Graph, degree_sequence
from graph_audit.models.records import MetricsRecord

logger = logging.getLogger(__name__)

Partition = List[List[int]]


def density(g: Graph) -> float:
    """2|E| / (|V|(|V|-1)), and 0 for fewer than two nodes"""
    if g.n <= 1:
        return 0.0
    return 2.0 * g.edge_count / (g.n * (g.n - 1))


def degree_assortativity(g: Graph) -> Optional[float]:
    """
    Pearson correlation of endpoint degrees over both edge orientations

    Returns:
        Coefficient, or None when undefined (no edges or zero degree variance)
    """
    if g.edge_count == 0:
        return None
    endpoint_degrees = np.array([g.degree(u) for u, v in g.edges()] + [g.degree(v) for u, v in g.edges()])
    if np.ptp(endpoint_degrees) == 0:
        return None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        value = nx.degree_assortativity_coefficient(g.to_networkx())
    if value is None or np.isnan(value):
        return None
    return float(value)


def label_propagation_partition(g: Graph, seed: int) -> Partition:
    """
    Asynchronous label propagation with a seeded generator

    Every node starts with its own label. Each sweep visits nodes in a
    shuffled order; a node keeps its label when it is among the most frequent
    neighbor labels and otherwise adopts one of them uniformly at random.
    Stops when a sweep changes nothing or after the sweep cap.

    Args:
        g: Graph to partition
        seed: Generator seed

    Returns:
        Communities as sorted id lists, ordered by smallest id
    """
    rng = np.random.default_rng(seed)
    labels = list(range(g.n))
    nodes = np.arange(g.n)

    for sweep in range(LABEL_PROPAGATION_MAX_SWEEPS):
        changed = False
        rng.shuffle(nodes)
        for node in nodes:
            neighbors = g.adjacency[node]
            if not neighbors:
                continue
            counts = Counter(labels[v] for v in neighbors)
            top = max(counts.values())
            best = sorted(label for label, c in counts.items() if c == top)
            if labels[node] in best:
                continue
            labels[node] = best[int(rng.integers(len(best)))]
            changed = True
        if not changed:
            logger.debug(f"Label propagation converged after {sweep + 1} sweeps")
            break

    blocks = {}
    for node, label in enumerate(labels):
        blocks.setdefault(label, []).append(node)
    return sorted(blocks.values(), key=lambda block: block[0])


def modularity(g: Graph, partition: Sequence[Sequence[int]]) -> Optional[float]:
    """
    Newman modularity of a partition

    Returns:
        Q, or None for an edgeless graph
    """
    covered = sorted(v for block in partition for v in block)
    if covered != list(range(g.n)):
        raise ValueError("partition must cover every node exactly once")
    m = g.edge_count
    if m == 0:
        return None

    community_of = np.empty(g.n, dtype=int)
    for index, block in enumerate(partition):
        community_of[list(block)] = index
    edges = np.array(g.edges())
    same = community_of[edges[:, 0]] == community_of[edges[:, 1]]
    intra = np.bincount(community_of[edges[same, 0]], minlength=len(partition))
    degrees = np.array([g.degree(v) for v in range(g.n)])
    degree_totals = np.bincount(community_of, weights=degrees, minlength=len(partition))
    return float(np.sum(intra / m - (degree_totals / (2 * m)) ** 2))


def degseq_distance(g: Graph, ref: Graph) -> float:
    """l2 distance between descending degree sequences, shorter one zero-padded"""
    a = degree_sequence(g)
    b = degree_sequence(ref)
    size = max(len(a), len(b))
    padded_a = np.pad(np.array(a, dtype=float), (0, size - len(a)))
    padded_b = np.pad(np.array(b, dtype=float), (0, size - len(b)))
    return float(np.linalg.norm(padded_a - padded_b))


def compute_metrics(name: str, g: Graph, ref: Graph, seed: int) -> MetricsRecord:
    """
    One statistics row for a graph against a reference

    Args:
        name: Row label (model id or reference key)
        g: Graph to describe
        ref: Reference for the degree-sequence distance
        seed: Label propagation seed
    """
    partition = label_propagation_partition(g, seed)
    return MetricsRecord(
        name=name,
        node_count=g.n,
        edge_count=g.edge_count,
        density=density(g),
        assortativity=degree_assortativity(g),
        modularity=modularity(g, partition),
        degseq_distance=degseq_distance(g, ref),
    )
