"""
Test Suite for the Graph Hallucination Audit
Graph Hallucination Audit - LLM Graph Recall Benchmark
"""
