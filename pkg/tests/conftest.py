"""
Pytest Configuration and Fixtures
Graph Hallucination Audit - LLM Graph Recall Benchmark
"""

import os
import shutil
import socket
import sys
import tempfile
import threading
import time
from pathlib import Path
from typing import Dict, Iterable, Tuple

import pytest
import uvicorn

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

from graph_audit.client.llm_client import render_prompt  # noqa: E402
from graph_audit.client.transcript_store import TranscriptStore, cache_key  # noqa: E402
from graph_audit.config import FIXTURES_DIR  # noqa: E402
from graph_audit.core.graph import Graph  # noqa: E402
from graph_audit.core.ground_truth import load_ground_truth  # noqa: E402
from graph_audit.models.records import Transcript  # noqa: E402
from graph_audit.pipeline.audit_pipeline import AuditPipeline  # noqa: E402
from graph_audit.server.replay_api import create_app  # noqa: E402


# ============================================================
# Graph helpers
# ============================================================

def make_graph(n: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    return Graph.from_edges(n, edges)


def complete_graph(n: int) -> Graph:
    return make_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(n: int) -> Graph:
    return make_graph(n, [(0, i) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def random_graph(rng, max_nodes: int) -> Graph:
    """Graph with 0..max_nodes nodes and each pair joined with probability 1/2"""
    n = int(rng.integers(0, max_nodes + 1))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
    return make_graph(n, edges)


def python_edge_list(edges: Iterable[Tuple[str, str]]) -> str:
    """A response presenting edges the way models usually do"""
    body = ", ".join(f"({a}, {b})" for a, b in edges)
    return f"Here is the graph:\n\n```python\nedges = [{body}]\nprint(edges)\n```\n"


@pytest.fixture(scope="session")
def karate() -> Graph:
    return load_ground_truth("karate")


@pytest.fixture(scope="session")
def duplicated_code_response() -> str:
    return (FIXTURES_DIR / "duplicated_code_response.txt").read_text(encoding="utf-8")


# ============================================================
# Store fixtures
# ============================================================

@pytest.fixture(scope="function")
def temp_output_dir():
    """Create a temporary output directory"""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)

    # Cleanup
    if os.path.exists(temp_dir):
        shutil.rmtree(temp_dir)


def write_transcripts(store_dir: Path, responses: Dict[str, Dict[str, str]]) -> TranscriptStore:
    """Store one transcript per model and target"""
    store = TranscriptStore(store_dir)
    for model_id, by_target in responses.items():
        for target, text in by_target.items():
            prompt = render_prompt(target)
            store.append(
                cache_key(model_id, prompt),
                Transcript(
                    model_id=model_id,
                    prompt=prompt,
                    response_text=text,
                    fetched_at="2024-09-01T12:00:00+00:00",
                    source="live",
                ),
            )
    return store


@pytest.fixture(scope="function")
def build_store(temp_output_dir):
    """
    Factory writing transcripts and a replay manifest

    Returns a function taking {model_id: {target: response_text}} and
    returning an AuditPipeline over the new store.
    """
    def build(responses: Dict[str, Dict[str, str]], seed: int = 0) -> AuditPipeline:
        store_dir = temp_output_dir / "store"
        write_transcripts(store_dir, responses)
        pipeline = AuditPipeline(store_dir, temp_output_dir / "reports", seed=seed)
        targets = sorted({t for by_target in responses.values() for t in by_target})
        pipeline.cmd_fetch(sorted(responses), targets, replay=True)
        return pipeline

    return build


# ============================================================
# Stub server fixtures
# ============================================================

def _free_port() -> int:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class ServerThread:
    """Runs a uvicorn server in a background thread"""

    def __init__(self, app):
        self.port = _free_port()
        config = uvicorn.Config(app, host="127.0.0.1", port=self.port, log_level="warning")
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self) -> None:
        self.thread.start()
        deadline = time.time() + 10
        while not self.server.started:
            if time.time() > deadline:
                raise RuntimeError("stub server did not start")
            time.sleep(0.05)

    def stop(self) -> None:
        self.server.should_exit = True
        self.thread.join(timeout=10)


@pytest.fixture(scope="function")
def stub_server():
    """Factory starting a replay endpoint over a store; stopped after the test"""
    servers = []

    def start(store: TranscriptStore, throttle_first: int = 0, api_key: str = None) -> ServerThread:
        server = ServerThread(create_app(store, throttle_first=throttle_first, api_key=api_key))
        server.start()
        servers.append(server)
        return server

    yield start

    for server in servers:
        server.stop()
