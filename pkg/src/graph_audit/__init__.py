"""
Graph Hallucination Audit
LLM Graph Recall Benchmark

Prompts LLM endpoints for well-known graphs, parses the returned edge lists
and measures how far they drift from ground truth.
"""

__version__ = "1.0.0"
