"""
Graph Core
Graph Hallucination Audit - LLM Graph Recall Benchmark

Undirected simple graph over canonical ids 0..n-1, construction from raw
labeled edge lists, structural queries and the edge-list text format.
"""

import logging
import shlex
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from graph_audit.config import ISOMORPHISM_SIZE_LIMIT
from graph_audit.exceptions import GraphSizeError

logger = logging.getLogger(__name__)

LabeledEdgeList = List[Tuple[str, str]]
Relabeling = Dict[str, int]


class Graph(BaseModel):
    """Immutable undirected simple graph"""
    model_config = ConfigDict(frozen=True)

    n: int
    adjacency: Tuple[FrozenSet[int], ...]
    labels: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_simple_graph(self) -> "Graph":
        if len(self.adjacency) != self.n:
            raise ValueError(f"adjacency has {len(self.adjacency)} rows for n={self.n}")
        if self.labels and len(self.labels) != self.n:
            raise ValueError(f"{len(self.labels)} labels for n={self.n}")
        for u, neighbors in enumerate(self.adjacency):
            for v in neighbors:
                if v == u:
                    raise ValueError(f"self-loop at node {u}")
                if not 0 <= v < self.n or u not in self.adjacency[v]:
                    raise ValueError(f"asymmetric or out-of-range edge {u}-{v}")
        return self

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]], labels: Optional[Sequence[str]] = None) -> "Graph":
        """
        Build a graph from integer edges, ignoring loops and repeats

        Args:
            n: Node count
            edges: Pairs of ids in 0..n-1
            labels: Optional label per id
        """
        neighbors: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            if u != v:
                neighbors[u].add(v)
                neighbors[v].add(u)
        return cls(
            n=n,
            adjacency=tuple(frozenset(s) for s in neighbors),
            labels=tuple(labels) if labels is not None else (),
        )

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.adjacency) // 2

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as sorted (u, v) pairs with u < v"""
        return [(u, v) for u in range(self.n) for v in sorted(self.adjacency[u]) if u < v]

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def label(self, node: int) -> str:
        return self.labels[node] if self.labels else str(node)

    def adjacency_matrix(self) -> np.ndarray:
        """Dense symmetric 0/1 matrix"""
        matrix = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.edges():
            matrix[u, v] = 1
            matrix[v, u] = 1
        return matrix

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g

    def to_edge_list(self) -> LabeledEdgeList:
        """Edges rendered with node labels"""
        return [(self.label(u), self.label(v)) for u, v in self.edges()]

    def relabeled(self, permutation: Sequence[int]) -> "Graph":
        """Copy with node i moved to id permutation[i]"""
        labels = None
        if self.labels:
            moved = [""] * self.n
            for i, p in enumerate(permutation):
                moved[p] = self.labels[i]
            labels = moved
        return Graph.from_edges(self.n, [(permutation[u], permutation[v]) for u, v in self.edges()], labels)


class CleanupReport(BaseModel):
    """What was dropped while normalizing a raw edge list"""
    duplicate_edges: int = 0
    self_loops: int = 0


def from_edge_list(raw: Sequence[Tuple[str, str]]) -> Tuple[Graph, Relabeling, CleanupReport]:
    """
    Normalize a raw labeled edge list into a simple graph

    Ids follow first appearance of each label. Self-loops and repeated
    unordered pairs are dropped and counted.

    Args:
        raw: Ordered (label, label) pairs

    Returns:
        (graph, label -> id map, cleanup report)
    """
    relabeling: Relabeling = {}
    report = CleanupReport()
    seen = set()
    edges = []

    for a, b in raw:
        for label in (a, b):
            if label not in relabeling:
                relabeling[label] = len(relabeling)
        u, v = relabeling[a], relabeling[b]
        if u == v:
            report.self_loops += 1
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            report.duplicate_edges += 1
            continue
        seen.add(key)
        edges.append(key)

    graph = Graph.from_edges(len(relabeling), edges, labels=list(relabeling))
    if report.self_loops or report.duplicate_edges:
        logger.debug(f"Cleanup dropped {report.duplicate_edges} duplicates and {report.self_loops} self-loops")
    return graph, relabeling, report


def degree_sequence(g: Graph) -> List[int]:
    """Degrees sorted descending"""
    return sorted((len(s) for s in g.adjacency), reverse=True)


def connected_components(g: Graph) -> List[List[int]]:
    """Components as sorted id lists, ordered by smallest id"""
    blocks = [sorted(c) for c in nx.connected_components(g.to_networkx())]
    return sorted(blocks, key=lambda block: block[0])


def adjacency_spectrum(g: Graph) -> np.ndarray:
    """Adjacency eigenvalues in ascending order"""
    if g.n == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(g.adjacency_matrix().astype(float))


def normalized_laplacian(g: Graph) -> np.ndarray:
    """I - D^-1/2 A D^-1/2, with an all-zero row for isolated nodes"""
    adjacency = g.adjacency_matrix().astype(float)
    degrees = adjacency.sum(axis=1)
    inv_sqrt = np.zeros(g.n)
    nonzero = degrees > 0
    inv_sqrt[nonzero] = 1.0 / np.sqrt(degrees[nonzero])
    laplacian = np.diag(nonzero.astype(float)) - inv_sqrt[:, None] * adjacency * inv_sqrt[None, :]
    return laplacian


def normalized_laplacian_spectrum(g: Graph) -> np.ndarray:
    """Normalized-Laplacian eigenvalues in ascending order, clipped to [0, 2]"""
    if g.n == 0:
        return np.zeros(0)
    return np.clip(np.linalg.eigvalsh(normalized_laplacian(g)), 0.0, 2.0)


def is_isomorphic_small(g1: Graph, g2: Graph) -> bool:
    """
    Exact isomorphism test for small graphs

    Raises:
        GraphSizeError: if both graphs exceed the exhaustive-search bound
    """
    if min(g1.n, g2.n) > ISOMORPHISM_SIZE_LIMIT:
        raise GraphSizeError(
            f"Isomorphism check limited to graphs with at most {ISOMORPHISM_SIZE_LIMIT} nodes "
            f"(got {g1.n} and {g2.n})"
        )
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return False
    if degree_sequence(g1) != degree_sequence(g2):
        return False
    return nx.is_isomorphic(g1.to_networkx(), g2.to_networkx())


# ============================================================
# Edge-list text format
# ============================================================

def _format_label(label: str) -> str:
    return shlex.quote(label)


def format_edge_list(edges: Iterable[Tuple[str, str]], comments: Sequence[str] = ()) -> str:
    """
    Render edges as `<label> <label>` lines after `#` comment lines

    Args:
        edges: Labeled pairs
        comments: Comment bodies written without the leading '# '
    """
    lines = [f"# {c}" for c in comments]
    lines.extend(f"{_format_label(a)} {_format_label(b)}" for a, b in edges)
    return "".join(line + "\n" for line in lines)


def read_edge_list_text(text: str) -> Tuple[LabeledEdgeList, List[str]]:
    """
    Parse edge-list text

    Returns:
        (edges, comment bodies)
    """
    edges: LabeledEdgeList = []
    comments: List[str] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comments.append(stripped[1:].strip())
            continue
        tokens = shlex.split(stripped)
        if len(tokens) != 2:
            raise ValueError(f"Line {number}: expected two labels, got {len(tokens)}: {line!r}")
        edges.append((tokens[0], tokens[1]))
    return edges, comments


def read_edge_list(path: Union[str, Path]) -> LabeledEdgeList:
    """Read a UTF-8 edge-list file"""
    edges, _ = read_edge_list_text(Path(path).read_text(encoding="utf-8"))
    return edges


def write_edge_list(path: Union[str, Path], edges: Iterable[Tuple[str, str]], comments: Sequence[str] = ()) -> None:
    """Write a UTF-8 edge-list file"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_edge_list(edges, comments))
