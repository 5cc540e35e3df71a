"""
Graph Distances
Graph Hallucination Audit - LLM Graph Recall Benchmark

Exact graph edit distance (best-first search with an assignment lower bound),
Graph Atlas Distance, spectral distance, edge diffs and rank correlation.
"""

import heapq
import itertools
import logging
import math
import re
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.stats import spearmanr

from graph_audit.config import DEFAULT_GED_BUDGET
from graph_audit.core.graph import Graph, adjacency_spectrum, is_isomorphic_small
from graph_audit.exceptions import AlignmentError, KeySetMismatchError
from graph_audit.models.records import DiffReport, GadScore, GedResult

logger = logging.getLogger(__name__)

INTEGER_LABEL = re.compile(r"-?\d+")
ALIGNMENT_SHIFTS = (0, -1, 1)


# ============================================================
# Graph edit distance
# ============================================================

class GraphEditDistance:
    """
    Unit-cost, label-agnostic edit distance between two graphs

    Nodes of the smaller graph are mapped injectively onto nodes of the
    larger one; unmatched large-graph nodes are inserted. The cost of a full
    injection is |n_l - n_s| + |E_s| + |E_l| - 2 * (edges preserved).
    """

    def __init__(self, g1: Graph, g2: Graph, budget: int = DEFAULT_GED_BUDGET):
        """
        Args:
            g1: Source graph
            g2: Target graph
            budget: Maximum number of search-node expansions
        """
        self.swapped = g1.n > g2.n
        small, large = (g2, g1) if self.swapped else (g1, g2)
        self.small = small.adjacency_matrix().astype(np.int64)
        self.large = large.adjacency_matrix().astype(np.int64)
        self.ns = small.n
        self.nl = large.n
        self.es = small.edge_count
        self.el = large.edge_count
        self.budget = budget
        self.order = self._matching_order()

    def _matching_order(self) -> List[int]:
        """Small-graph nodes, densest first, then most connected to those already placed"""
        degrees = self.small.sum(axis=1)
        remaining = set(range(self.ns))
        order: List[int] = []
        while remaining:
            def priority(v: int) -> Tuple[int, int, int]:
                links = int(self.small[v, order].sum()) if order else 0
                return (-links, -int(degrees[v]), v)
            nxt = min(remaining, key=priority)
            order.append(nxt)
            remaining.remove(nxt)
        return order

    def full_cost(self, phi: Sequence[int]) -> int:
        """Edit cost of mapping small node i to large node phi[i]"""
        phi = np.asarray(phi, dtype=np.int64)
        image = self.large[np.ix_(phi, phi)]
        mismatched = int((self.small != image).sum()) // 2
        image_edges = int(image.sum()) // 2
        return (self.nl - self.ns) + mismatched + (self.el - image_edges)

    def _bound(self, images: Sequence[int]) -> Tuple[float, Dict[int, int]]:
        """
        Admissible lower bound on the remaining cost, plus the completion it suggests

        Cross edges to already-mapped nodes are costed exactly inside the
        assignment; edges among unmapped nodes are bounded by half the
        degree mismatch.
        """
        k = len(images)
        assigned = self.order[:k]
        unassigned = self.order[k:]
        used = set(images)
        unused = [w for w in range(self.nl) if w not in used]

        s_ua = self.small[np.ix_(unassigned, assigned)]
        l_wi = self.large[np.ix_(unused, list(images))]
        cross = s_ua @ (1 - l_wi).T + (1 - s_ua) @ l_wi.T
        to_image = l_wi.sum(axis=1)
        deg_u = self.small[np.ix_(unassigned, unassigned)].sum(axis=1)
        deg_w = self.large[np.ix_(unused, unused)].sum(axis=1)

        constant = float(to_image.sum()) + 0.5 * float(deg_w.sum())
        if not unassigned:
            return constant, {}

        cost = (
            cross
            - to_image[None, :]
            + 0.5 * np.abs(deg_u[:, None] - deg_w[None, :])
            - 0.5 * deg_w[None, :]
        )
        rows, cols = linear_sum_assignment(cost)
        completion = {unassigned[r]: unused[c] for r, c in zip(rows, cols)}
        return float(cost[rows, cols].sum()) + constant, completion

    def _complete(self, images: Sequence[int], completion: Dict[int, int]) -> np.ndarray:
        phi = np.empty(self.ns, dtype=np.int64)
        for u, w in zip(self.order, images):
            phi[u] = w
        for u, w in completion.items():
            phi[u] = w
        return phi

    def _result(self, distance: int, exact: bool, explored: int, phi: Optional[np.ndarray]) -> GedResult:
        mapping = None
        if phi is not None:
            pairs = {int(u): int(w) for u, w in enumerate(phi)}
            mapping = {w: u for u, w in pairs.items()} if self.swapped else pairs
            mapping = dict(sorted(mapping.items()))
        return GedResult(distance=distance, exact=exact, explored_nodes=explored, mapping=mapping)

    def compute(self) -> GedResult:
        """
        Run the best-first search

        Returns:
            GedResult; exact=False when the expansion budget ran out
        """
        base = self.nl - self.ns
        if self.ns == 0:
            return self._result(base + self.el, True, 0, np.empty(0, dtype=np.int64))

        best_cost = base + self.es + self.el
        best_phi: Optional[np.ndarray] = None

        root_h, root_completion = self._bound(())
        best_phi = self._complete((), root_completion)
        best_cost = min(best_cost, self.full_cost(best_phi))

        counter = itertools.count()
        heap = [(base + math.ceil(root_h - 1e-9), 0, next(counter), (), base)]
        explored = 0

        while heap:
            f, _, _, images, g = heapq.heappop(heap)
            if f >= best_cost:
                return self._result(best_cost, True, explored, best_phi)
            k = len(images)
            if k == self.ns:
                # leaf bound is exact, so f is the cost of this mapping
                return self._result(int(f), True, explored, self._complete(images, {}))
            if explored >= self.budget:
                logger.warning(f"GED budget of {self.budget} expansions exhausted; returning upper bound {best_cost}")
                return self._result(best_cost, False, explored, best_phi)
            explored += 1

            u = self.order[k]
            assigned = self.order[:k]
            used = set(images)
            for w in range(self.nl):
                if w in used:
                    continue
                step = int((self.small[u, assigned] != self.large[w, list(images)]).sum()) if k else 0
                child = images + (w,)
                child_g = g + step
                h, completion = self._bound(child)
                child_f = child_g + math.ceil(h - 1e-9)
                phi = self._complete(child, completion)
                cost = self.full_cost(phi)
                if cost < best_cost:
                    best_cost, best_phi = cost, phi
                if child_f < best_cost:
                    heapq.heappush(heap, (child_f, -(k + 1), next(counter), child, child_g))

        return self._result(best_cost, True, explored, best_phi)


def graph_edit_distance(g1: Graph, g2: Graph, budget: Optional[int] = None) -> GedResult:
    """
    Exact unit-cost graph edit distance

    Args:
        g1: Source graph
        g2: Target graph
        budget: Expansion limit; the default keeps large searches bounded

    Returns:
        GedResult with distance, exactness flag, expansions and a witness mapping
    """
    return GraphEditDistance(g1, g2, budget if budget is not None else DEFAULT_GED_BUDGET).compute()


# ============================================================
# Graph Atlas Distance
# ============================================================

def gad(
    outputs: Dict[int, Graph],
    truths: Dict[int, Graph],
    budget: Optional[int] = None,
    model_id: Optional[str] = None,
) -> GadScore:
    """
    Mean and population std of edit distances to the selected atlas graphs

    Each graph is also flagged when it is isomorphic to its reference.

    Args:
        outputs: Atlas index -> graph returned by the model
        truths: Atlas index -> reference graph
        budget: Expansion limit per distance
        model_id: Recorded on the score

    Raises:
        KeySetMismatchError: when the two maps cover different indices
        GraphSizeError: when a reference is too large for the isomorphism check
    """
    if set(outputs) != set(truths):
        raise KeySetMismatchError(outputs, truths, what="atlas indices")
    if not truths:
        raise ValueError("at least one atlas graph is required")

    per_graph = {index: graph_edit_distance(outputs[index], truths[index], budget) for index in sorted(truths)}
    isomorphic = {index: is_isomorphic_small(outputs[index], truths[index]) for index in sorted(truths)}
    distances = np.array([r.distance for r in per_graph.values()], dtype=float)
    return GadScore(
        model_id=model_id,
        resolution=len(per_graph),
        per_graph=per_graph,
        isomorphic=isomorphic,
        mean=float(np.mean(distances)),
        std=float(np.std(distances)),
    )


# ============================================================
# Spectral distance
# ============================================================

def spectral_distance(g1: Graph, g2: Graph) -> float:
    """l2 distance between descending adjacency spectra, shorter one zero-padded"""
    a = np.sort(adjacency_spectrum(g1))[::-1]
    b = np.sort(adjacency_spectrum(g2))[::-1]
    size = max(len(a), len(b))
    a = np.pad(a, (0, size - len(a)))
    b = np.pad(b, (0, size - len(b)))
    return float(np.linalg.norm(a - b))


# ============================================================
# Edge diff
# ============================================================

def _label_key(label: str) -> Tuple[int, object]:
    if INTEGER_LABEL.fullmatch(label):
        return (0, int(label))
    return (1, label)


def _edge(a: str, b: str) -> Tuple[str, str]:
    return (a, b) if _label_key(a) <= _label_key(b) else (b, a)


def _labeled_edges(g: Graph) -> set:
    return {_edge(g.label(u), g.label(v)) for u, v in g.edges()}


def default_alignment(out: Graph, ref: Graph) -> Tuple[Dict[str, str], int]:
    """
    Map output labels onto reference labels

    When every label on both sides is an integer, output labels are shifted
    by the first of 0, -1, +1 that maximizes the shared edges. Otherwise the
    identity map is used.

    Returns:
        (label map, shift applied)
    """
    out_labels = [out.label(v) for v in range(out.n)]
    ref_labels = [ref.label(v) for v in range(ref.n)]
    if not all(INTEGER_LABEL.fullmatch(x) for x in out_labels + ref_labels):
        return {label: label for label in out_labels}, 0

    ref_edges = _labeled_edges(ref)
    best_shift, best_overlap = 0, -1
    for shift in ALIGNMENT_SHIFTS:
        shifted = {_edge(str(int(out.label(u)) + shift), str(int(out.label(v)) + shift)) for u, v in out.edges()}
        overlap = len(shifted & ref_edges)
        if overlap > best_overlap:
            best_shift, best_overlap = shift, overlap
    return {label: str(int(label) + best_shift) for label in out_labels}, best_shift


def graph_diff(out: Graph, ref: Graph, alignment: Optional[Dict[str, str]] = None) -> DiffReport:
    """
    Shared, added and missing edges of an output graph against a reference

    Args:
        out: Graph returned by a model
        ref: Reference graph
        alignment: Output label -> reference label; computed when None

    Raises:
        AlignmentError: when two output labels map to the same reference label
    """
    shift = 0
    if alignment is None:
        alignment, shift = default_alignment(out, ref)

    effective = {out.label(v): alignment.get(out.label(v), out.label(v)) for v in range(out.n)}
    if len(set(effective.values())) != len(effective):
        collisions = sorted(t for t in set(effective.values()) if list(effective.values()).count(t) > 1)
        raise AlignmentError(f"Alignment is not injective; shared targets: {collisions}")

    out_edges = {_edge(effective[out.label(u)], effective[out.label(v)]) for u, v in out.edges()}
    ref_edges = _labeled_edges(ref)

    def ordered(edges: set) -> List[Tuple[str, str]]:
        return sorted(edges, key=lambda e: (_label_key(e[0]), _label_key(e[1])))

    return DiffReport(
        intersection=ordered(out_edges & ref_edges),
        added=ordered(out_edges - ref_edges),
        missing=ordered(ref_edges - out_edges),
        alignment=dict(sorted(effective.items(), key=lambda item: _label_key(item[0]))),
        shift=shift,
    )


# ============================================================
# Rank correlation
# ============================================================

def spearman_rank_correlation(rank_a: Sequence[str], rank_b: Sequence[str]) -> float:
    """
    Spearman rho between two orderings of the same ids

    Raises:
        KeySetMismatchError: when the orderings hold different ids
    """
    if len(set(rank_a)) != len(rank_a) or len(set(rank_b)) != len(rank_b):
        raise ValueError("rankings must not repeat ids")
    if set(rank_a) != set(rank_b):
        raise KeySetMismatchError(rank_a, rank_b, what="model ids")
    if len(rank_a) < 2:
        raise ValueError("rank correlation needs at least two ids")

    position_b = {model_id: i for i, model_id in enumerate(rank_b)}
    rho, _ = spearmanr(np.arange(len(rank_a)), [position_b[m] for m in rank_a])
    return float(rho)
