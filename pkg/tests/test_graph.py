"""
Graph Core Unit Tests
Graph Hallucination Audit - LLM Graph Recall Benchmark
"""

import numpy as np
import pytest
from pydantic import ValidationError

from graph_audit.core.graph import (
    Graph,
    adjacency_spectrum,
    connected_components,
    degree_sequence,
    format_edge_list,
    from_edge_list,
    is_isomorphic_small,
    normalized_laplacian_spectrum,
    read_edge_list_text,
)
from graph_audit.exceptions import GraphSizeError
from graph_audit.parsing.response_parser import extract_edge_list
from tests.conftest import complete_graph, cycle_graph, make_graph, path_graph, random_graph, star_graph


class TestConstruction:
    """Normalizing raw labeled edge lists"""

    def test_dedupe_and_self_loop(self):
        """Should drop the repeated pair and the loop but keep the loop's node"""
        graph, relabeling, report = from_edge_list([("1", "2"), ("1", "2"), ("3", "3")])
        assert graph.n == 3
        assert graph.edges() == [(0, 1)]
        assert relabeling == {"1": 0, "2": 1, "3": 2}
        assert report.duplicate_edges == 1
        assert report.self_loops == 1

    def test_reversed_pair_is_duplicate(self):
        """Should treat (a, b) and (b, a) as the same edge"""
        graph, _, report = from_edge_list([("a", "b"), ("b", "a")])
        assert graph.edge_count == 1
        assert report.duplicate_edges == 1

    def test_empty(self):
        """Should build the empty graph from an empty list"""
        graph, relabeling, report = from_edge_list([])
        assert graph.n == 0
        assert relabeling == {}
        assert report.duplicate_edges == 0 and report.self_loops == 0

    def test_first_appearance_ids(self):
        """Should number labels in order of first appearance"""
        graph, relabeling, _ = from_edge_list([("z", "y"), ("x", "z")])
        assert relabeling == {"z": 0, "y": 1, "x": 2}
        assert graph.labels == ("z", "y", "x")

    def test_duplicated_code_response(self, duplicated_code_response):
        """Should build 30 nodes and 53 edges from the long duplicated response"""
        result = extract_edge_list(duplicated_code_response)
        graph, _, _ = from_edge_list(result.edges)
        assert graph.n == 30
        assert graph.edge_count == 53

    def test_rejects_asymmetric_adjacency(self):
        """Should refuse an adjacency that is not symmetric"""
        with pytest.raises(ValidationError):
            Graph(n=2, adjacency=(frozenset({1}), frozenset()))

    def test_rejects_self_loop(self):
        """Should refuse a node adjacent to itself"""
        with pytest.raises(ValidationError):
            Graph(n=1, adjacency=(frozenset({0}),))

    def test_reserialization_is_isomorphic(self):
        """Should rebuild an isomorphic graph from its own edge list"""
        rng = np.random.default_rng(7)
        for _ in range(20):
            graph = random_graph(rng, 7)
            rebuilt, _, _ = from_edge_list(graph.to_edge_list())
            # isolated nodes do not survive an edge list
            assert rebuilt.edge_count == graph.edge_count
            assert degree_sequence(rebuilt) == [d for d in degree_sequence(graph) if d > 0]


class TestStructure:
    """Degree sequences and components"""

    def test_degree_sequences(self):
        """Should sort degrees descending"""
        assert degree_sequence(complete_graph(3)) == [2, 2, 2]
        assert degree_sequence(star_graph(4)) == [3, 1, 1, 1]

    def test_karate_handshake(self, karate):
        """Should sum karate club degrees to twice its 78 edges"""
        sequence = degree_sequence(karate)
        assert len(sequence) == 34
        assert sum(sequence) == 156
        assert sequence[0] == 17

    def test_handshake_random(self):
        """Should satisfy the handshake identity on random graphs"""
        rng = np.random.default_rng(1)
        for _ in range(50):
            graph = random_graph(rng, 9)
            assert sum(degree_sequence(graph)) == 2 * graph.edge_count

    def test_degree_sequence_permutation_invariant(self):
        """Should not depend on node numbering"""
        rng = np.random.default_rng(2)
        for _ in range(30):
            graph = random_graph(rng, 8)
            permuted = graph.relabeled(rng.permutation(graph.n).tolist())
            assert degree_sequence(permuted) == degree_sequence(graph)

    def test_components(self):
        """Should split graphs into connected blocks"""
        assert len(connected_components(make_graph(2, [(0, 1)]))) == 1
        assert connected_components(make_graph(2, [])) == [[0], [1]]
        assert connected_components(make_graph(4, [(0, 1), (1, 2), (0, 2)])) == [[0, 1, 2], [3]]


class TestSpectra:
    """Adjacency and normalized-Laplacian eigenvalues"""

    def test_adjacency_known(self):
        """Should reproduce small known spectra"""
        np.testing.assert_allclose(adjacency_spectrum(complete_graph(2)), [-1, 1], atol=1e-9)
        np.testing.assert_allclose(adjacency_spectrum(make_graph(2, [])), [0, 0], atol=1e-9)
        np.testing.assert_allclose(adjacency_spectrum(cycle_graph(4)), [-2, 0, 0, 2], atol=1e-9)

    def test_adjacency_trace(self, karate):
        """Should sum to zero within tolerance"""
        spectrum = adjacency_spectrum(karate)
        assert abs(spectrum.sum()) <= 1e-9 * karate.n
        assert np.all(np.diff(spectrum) >= 0)

    def test_laplacian_known(self):
        """Should reproduce small known normalized-Laplacian spectra"""
        np.testing.assert_allclose(normalized_laplacian_spectrum(make_graph(1, [])), [0], atol=1e-9)
        np.testing.assert_allclose(normalized_laplacian_spectrum(complete_graph(2)), [0, 2], atol=1e-9)
        np.testing.assert_allclose(normalized_laplacian_spectrum(complete_graph(3)), [0, 1.5, 1.5], atol=1e-9)

    def test_laplacian_zero_multiplicity(self):
        """Should have one zero eigenvalue per component, isolated nodes included"""
        graph = make_graph(6, [(0, 1), (1, 2), (3, 4)])
        spectrum = normalized_laplacian_spectrum(graph)
        assert np.sum(np.abs(spectrum) < 1e-9) == 3
        assert np.all(spectrum >= 0) and np.all(spectrum <= 2)

    def test_spectra_permutation_invariant(self):
        """Should match for relabeled graphs"""
        rng = np.random.default_rng(3)
        for _ in range(30):
            graph = random_graph(rng, 8)
            permuted = graph.relabeled(rng.permutation(graph.n).tolist())
            np.testing.assert_allclose(adjacency_spectrum(permuted), adjacency_spectrum(graph), atol=1e-9)
            np.testing.assert_allclose(
                normalized_laplacian_spectrum(permuted), normalized_laplacian_spectrum(graph), atol=1e-9
            )


class TestIsomorphism:
    """Exact small-graph isomorphism"""

    def test_cases(self):
        """Should tell apart K3, P3, stars and paths"""
        shuffled = complete_graph(3).relabeled([2, 0, 1])
        assert is_isomorphic_small(complete_graph(3), shuffled)
        assert not is_isomorphic_small(complete_graph(3), path_graph(3))
        assert not is_isomorphic_small(star_graph(4), path_graph(4))

    def test_size_bound(self, karate):
        """Should reject two graphs above the exhaustive bound"""
        with pytest.raises(GraphSizeError):
            is_isomorphic_small(karate, karate)


class TestEdgeListText:
    """Edge-list text format"""

    def test_round_trip_bytes(self):
        """Should reproduce the exact text, comments included"""
        text = "# two comments\n# here\n0 1\n1 2\n'Jean Valjean' Javert\n"
        edges, comments = read_edge_list_text(text)
        assert edges == [("0", "1"), ("1", "2"), ("Jean Valjean", "Javert")]
        assert format_edge_list(edges, comments) == text

    def test_rejects_bad_line(self):
        """Should reject a line without two labels"""
        with pytest.raises(ValueError):
            read_edge_list_text("0 1 2\n")
