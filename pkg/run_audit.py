"""
Audit Launcher
Graph Hallucination Audit - LLM Graph Recall Benchmark

Runs the graph-audit command line from a source checkout
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from graph_audit.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
