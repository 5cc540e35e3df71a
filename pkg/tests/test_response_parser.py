"""
Response Parser Tests
Graph Hallucination Audit - LLM Graph Recall Benchmark
"""

import re

from graph_audit.models.records import Classification, ParserConfig
from graph_audit.parsing.response_parser import ResponseParser, classify_response, extract_edge_list


class TestExtraction:
    """Pulling edge lists out of responses"""

    def test_duplicated_code_response(self, duplicated_code_response):
        """Should find 53 unique edges over 30 labels and flag the repeated block"""
        result = extract_edge_list(duplicated_code_response)
        assert result.classification == Classification.EDGE_LIST
        assert len(result.edges) == 53
        assert len(result.labels) == 30
        assert result.warning_count("duplicate") == 53
        assert result.warning_count("truncated_tail") == 0
        assert result.warning_count("multiple_lists") == 2

    def test_truncated_tail(self):
        """Should drop a dangling tuple at the end of the text"""
        result = extract_edge_list("edges = [(1, 2), (2, 3), (3,")
        assert result.classification == Classification.EDGE_LIST
        assert result.edges == [("1", "2"), ("2", "3")]
        assert result.warning_count("truncated_tail") == 1

    def test_truncated_inside_open_fence(self):
        """Should flag truncation inside an unterminated code block"""
        result = extract_edge_list("```python\nG.add_edge(1, 2)\nG.add_edge(3, ")
        assert result.edges == [("1", "2")]
        assert result.warning_count("truncated_tail") == 1

    def test_quoted_labels(self):
        """Should accept quoted labels and keep their inner text"""
        result = extract_edge_list("edges = [('Valjean', \"Javert\"), ('Myriel', 'Napoleon')]")
        assert result.edges == [("Valjean", "Javert"), ("Myriel", "Napoleon")]
        assert result.warnings == []

    def test_reversed_duplicates_collapse(self):
        """Should keep the first orientation of an unordered pair"""
        result = extract_edge_list("[(1, 2), (2, 1), (1, 2)]")
        assert result.edges == [("1", "2")]
        assert result.warning_count("duplicate") == 2

    def test_self_loop_flagged(self):
        """Should keep a self-loop and warn about it"""
        result = extract_edge_list("[(1, 1), (1, 2)]")
        assert ("1", "1") in result.edges
        assert result.warning_count("self_loop") == 1

    def test_mixed_label_types(self):
        """Should accept integer and string labels together, with a warning"""
        result = extract_edge_list("[(1, 'a'), (2, 3)]")
        assert len(result.edges) == 2
        assert result.warning_count("mixed_label_types") == 1

    def test_prose_tuples_ignored(self):
        """Should ignore tuples outside any list or code block"""
        result = extract_edge_list("The point (3, 4) is far from (0, 0).\n\n[(1, 2)]")
        assert result.edges == [("1", "2")]

    def test_stray_bracket_in_prose(self):
        """Should not let an unclosed bracket in prose pull in later coordinates"""
        text = (
            "Edges [see the note below.\nThe centroid sits at (40, 70) on the layout.\n"
            "```python\nedges = [(1, 2), (2, 3)]\n```"
        )
        result = extract_edge_list(text)
        assert result.edges == [("1", "2"), ("2", "3")]
        assert result.warnings == []

    def test_unclosed_list_ends_at_next_list(self):
        """Should stop an unclosed list where the next closed list begins"""
        result = extract_edge_list("first = [(1, 2), (2, 3)\nsecond = [(3, 4)]\nAt (7, 8) the plot ends.")
        assert result.edges == [("1", "2"), ("2", "3"), ("3", "4")]
        assert result.warning_count("multiple_lists") == 2
        assert result.warning_count("truncated_tail") == 0

    def test_prose_only_tuples(self):
        """Should not treat prose coordinates as an edge list"""
        result = extract_edge_list("The point (3, 4) lies on the curve.")
        assert result.classification == Classification.EMPTY
        assert result.edges == []

    def test_whitespace_reflow(self):
        """Should extract the same edges however the tuples are wrapped"""
        compact = extract_edge_list("[(1,2),(2,3),(3,4)]")
        spread = extract_edge_list("[\n  ( 1 ,\n 2 ),\n\t(2,   3),\n(3,\n4)\n]")
        assert compact.edges == spread.edges

    def test_multiple_lists_merge(self):
        """Should merge several lists in order of first occurrence"""
        result = extract_edge_list("first = [(1, 2), (2, 3)]\nsecond = [(3, 4), (2, 1)]")
        assert result.edges == [("1", "2"), ("2", "3"), ("3", "4")]
        assert result.warning_count("multiple_lists") == 2
        assert result.warning_count("duplicate") == 1

    def test_deterministic(self, duplicated_code_response):
        """Should return identical results for identical text"""
        assert extract_edge_list(duplicated_code_response) == extract_edge_list(duplicated_code_response)

    def test_labels_come_from_text(self, duplicated_code_response):
        """Should only produce labels that occur in the input"""
        for label in extract_edge_list(duplicated_code_response).labels:
            assert re.search(re.escape(label), duplicated_code_response)


class TestClassification:
    """Recognizing unusable responses"""

    def test_refusal(self):
        """Should classify a refusal cue without tuples as Refusal"""
        assert classify_response("I don't have access to that data.") == Classification.REFUSAL
        result = extract_edge_list("I don't have access to that data.")
        assert result.classification == Classification.REFUSAL
        assert result.edges == []

    def test_refusal_case_insensitive(self):
        """Should match refusal cues regardless of case"""
        assert classify_response("As an AI language model, I cannot do that.") == Classification.REFUSAL

    def test_code_only(self):
        """Should classify a generator call without literal tuples as CodeOnly"""
        text = "```python\nimport networkx as nx\nG = nx.karate_club_graph()\nprint(G.edges())\n```"
        assert classify_response(text) == Classification.CODE_ONLY

    def test_generator_named_in_prose(self):
        """Should only treat generator calls inside code blocks as CodeOnly"""
        text = "I cannot provide the data, but networkx ships it as karate_club_graph() if you need it."
        assert classify_response(text) == Classification.REFUSAL

    def test_literal_list_beats_generator(self):
        """Should prefer a literal edge list over generator code"""
        text = "```python\nG = nx.karate_club_graph()\nedges = [(0, 1), (0, 2)]\n```"
        assert classify_response(text) == Classification.EDGE_LIST

    def test_duplicated_code_is_edge_list(self, duplicated_code_response):
        """Should classify the long code response as an edge list"""
        assert classify_response(duplicated_code_response) == Classification.EDGE_LIST

    def test_empty(self):
        """Should classify blank text as Empty"""
        assert classify_response("") == Classification.EMPTY
        assert classify_response("   \n") == Classification.EMPTY

    def test_configurable_cues(self):
        """Should use configured cue lists"""
        parser = ResponseParser(ParserConfig(refusal_cues=["sorry"], code_patterns=["load_graph("]))
        assert parser.classify_response("Sorry, no.") == Classification.REFUSAL
        assert parser.classify_response("```\nG = load_graph()\n```") == Classification.CODE_ONLY
        assert parser.classify_response("I don't have access") == Classification.EMPTY
