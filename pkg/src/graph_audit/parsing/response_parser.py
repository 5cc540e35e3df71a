"""
Response Parser
Graph Hallucination Audit - LLM Graph Recall Benchmark

Extracts edge lists from free-form LLM responses:
1. Locate list contexts (bracket spans and fenced code blocks)
2. Collect `(<token>, <token>)` pairs inside them
3. Collapse repeats, flag anomalies, classify unusable replies
"""

import logging
import re
from typing import Dict, List, Optional, Tuple

from graph_audit.models.records import Classification, ParseResult, ParserConfig, ParseWarning

logger = logging.getLogger(__name__)

INT_TOKEN = r"-?\d+"
QUOTED_TOKEN = r'"[^"\n]*"|\'[^\'\n]*\''
TOKEN = rf"{INT_TOKEN}|{QUOTED_TOKEN}"

PAIR_PATTERN = re.compile(rf"\(\s*({TOKEN})\s*,\s*({TOKEN})\s*\)")
DANGLING_TUPLE_PATTERN = re.compile(
    r"\(\s*(?:-?\d+|\"[^\"\n]*\"?|'[^'\n]*'?)?\s*(?:,\s*(?:-?\d+|\"[^\"\n]*\"?|'[^'\n]*'?)?\s*)?\Z"
)
LIST_OPENING = re.compile(r"\s*[\[(]")
FENCE = "```"

Span = Tuple[int, int]


def _fence_spans(text: str) -> Tuple[List[Span], bool]:
    """Fenced code blocks, and whether the last one is left open"""
    marks = [m.start() for m in re.finditer(re.escape(FENCE), text)]
    spans = []
    for i in range(0, len(marks), 2):
        start = marks[i]
        end = marks[i + 1] + len(FENCE) if i + 1 < len(marks) else len(text)
        spans.append((start, end))
    return spans, len(marks) % 2 == 1


def _bracket_spans(text: str) -> Tuple[List[Span], bool]:
    """
    Outermost [...] spans, and whether a list is left open at the end

    An unmatched `[` only opens a list when a tuple or nested list follows
    it; that list ends where the next closed list starts.
    """
    opened: List[int] = []
    closed: List[Span] = []
    for i, ch in enumerate(text):
        if ch == "[":
            opened.append(i)
        elif ch == "]" and opened:
            start = opened.pop()
            while closed and closed[-1][0] > start:
                closed.pop()
            closed.append((start, i + 1))

    spans = list(closed)
    left_open = False
    for start in opened:
        if LIST_OPENING.match(text, start + 1) is None:
            continue
        end = next((s for s, _ in closed if s > start), len(text))
        spans.append((start, end))
        left_open = left_open or end == len(text)
    spans.sort()
    return spans, left_open


def _containing(spans: List[Span], pos: int) -> Optional[Span]:
    for span in spans:
        if span[0] <= pos < span[1]:
            return span
    return None


def _label(token: str) -> Tuple[str, bool]:
    """Label text and whether the token was an integer"""
    if token[0] in "\"'":
        return token[1:-1], False
    return token, True


class ResponseParser:
    """Turns raw response text into a ParseResult"""

    def __init__(self, config: Optional[ParserConfig] = None):
        """
        Initialize the parser

        Args:
            config: Refusal cues and code-generator patterns; defaults if None
        """
        self.config = config or ParserConfig()
        self._refusal_patterns = [re.compile(re.escape(cue), re.IGNORECASE) for cue in self.config.refusal_cues]

    def _find_pairs(self, text: str) -> Tuple[List[Tuple[str, str, bool, bool]], int, bool]:
        """
        Pairs inside list contexts, in order of appearance

        Returns:
            (pairs with integer flags, number of contexts that held pairs, truncated tail seen)
        """
        brackets, bracket_open = _bracket_spans(text)
        fences, fence_open = _fence_spans(text)

        pairs = []
        contexts = set()
        for match in PAIR_PATTERN.finditer(text):
            context = _containing(brackets, match.start()) or _containing(fences, match.start())
            if context is None:
                continue
            contexts.add(context)
            a, a_int = _label(match.group(1))
            b, b_int = _label(match.group(2))
            pairs.append((a, b, a_int, b_int))

        truncated = (bracket_open or fence_open) and DANGLING_TUPLE_PATTERN.search(text.rstrip()) is not None
        return pairs, len(contexts), truncated

    def _generator_call_in_code(self, text: str) -> bool:
        """Whether a code block calls one of the configured graph generators"""
        fences, _ = _fence_spans(text)
        return any(pattern in text[start:end] for start, end in fences for pattern in self.config.code_patterns)

    def classify_response(self, text: str) -> Classification:
        """
        Classify a response

        Args:
            text: Raw response text

        Returns:
            EdgeList, CodeOnly, Refusal or Empty
        """
        if not text.strip():
            return Classification.EMPTY
        pairs, _, _ = self._find_pairs(text)
        if pairs:
            return Classification.EDGE_LIST
        if self._generator_call_in_code(text):
            return Classification.CODE_ONLY
        if any(p.search(text) for p in self._refusal_patterns):
            return Classification.REFUSAL
        return Classification.EMPTY

    def extract_edge_list(self, text: str) -> ParseResult:
        """
        Extract the edge list of a response

        Args:
            text: Raw response text

        Returns:
            ParseResult with unique unordered pairs in first-occurrence order
        """
        classification = self.classify_response(text)
        if classification != Classification.EDGE_LIST:
            return ParseResult(classification=classification)

        pairs, context_count, truncated = self._find_pairs(text)
        edges: List[Tuple[str, str]] = []
        seen = set()
        duplicates = 0
        self_loops = 0
        int_labels: Dict[str, None] = {}
        str_labels: Dict[str, None] = {}

        for a, b, a_int, b_int in pairs:
            (int_labels if a_int else str_labels).setdefault(a, None)
            (int_labels if b_int else str_labels).setdefault(b, None)
            key = (a, b) if a <= b else (b, a)
            if key in seen:
                duplicates += 1
                continue
            seen.add(key)
            if a == b:
                self_loops += 1
            edges.append((a, b))

        warnings = []
        if duplicates:
            warnings.append(ParseWarning(kind="duplicate", count=duplicates))
        if self_loops:
            warnings.append(ParseWarning(kind="self_loop", count=self_loops))
        if truncated:
            warnings.append(ParseWarning(kind="truncated_tail", count=1))
        if int_labels and str_labels:
            warnings.append(ParseWarning(kind="mixed_label_types", count=min(len(int_labels), len(str_labels))))
        if context_count > 1:
            warnings.append(ParseWarning(kind="multiple_lists", count=context_count))

        logger.debug(f"Extracted {len(edges)} edges from {len(pairs)} pairs ({len(warnings)} warning kinds)")
        return ParseResult(classification=classification, edges=edges, warnings=warnings)


_default_parser = ResponseParser()


def extract_edge_list(text: str, config: Optional[ParserConfig] = None) -> ParseResult:
    """Module-level shortcut for ResponseParser.extract_edge_list"""
    parser = ResponseParser(config) if config is not None else _default_parser
    return parser.extract_edge_list(text)


def classify_response(text: str, config: Optional[ParserConfig] = None) -> Classification:
    """Module-level shortcut for ResponseParser.classify_response"""
    parser = ResponseParser(config) if config is not None else _default_parser
    return parser.classify_response(text)
