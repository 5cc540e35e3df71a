"""
Replay Endpoint Tests
Graph Hallucination Audit - LLM Graph Recall Benchmark
"""

from fastapi import status
from fastapi.testclient import TestClient

from graph_audit.client.llm_client import render_prompt
from graph_audit.server.replay_api import create_app
from tests.conftest import write_transcripts


def request_body(model_id, prompt):
    return {"model": model_id, "messages": [{"role": "user", "content": prompt}]}


class TestReplayEndpoint:
    """Chat-completions replay"""

    def test_health_check(self, temp_output_dir):
        """Health endpoint reports the stored transcript count"""
        store = write_transcripts(temp_output_dir, {"m1": {"karate": "a", "atlas:7": "b"}})
        client = TestClient(create_app(store))
        response = client.get("/health")
        assert response.status_code == status.HTTP_200_OK
        assert response.json() == {"status": "healthy", "transcripts": 2}

    def test_completion(self, temp_output_dir):
        """Completion returns the stored text as the assistant message"""
        store = write_transcripts(temp_output_dir, {"m1": {"karate": "edges = [(0, 1)]"}})
        client = TestClient(create_app(store))
        response = client.post("/chat/completions", json=request_body("m1", render_prompt("karate")))
        assert response.status_code == status.HTTP_200_OK
        data = response.json()
        assert data["model"] == "m1"
        assert data["id"].startswith("replay-")
        assert data["choices"][0]["message"] == {"role": "assistant", "content": "edges = [(0, 1)]"}

    def test_unknown_pair(self, temp_output_dir):
        """Unknown (model, prompt) pairs return 404"""
        store = write_transcripts(temp_output_dir, {"m1": {"karate": "x"}})
        client = TestClient(create_app(store))
        response = client.post("/chat/completions", json=request_body("m2", render_prompt("karate")))
        assert response.status_code == status.HTTP_404_NOT_FOUND

    def test_api_key_required(self, temp_output_dir):
        """Wrong bearer tokens return 401"""
        store = write_transcripts(temp_output_dir, {"m1": {"karate": "x"}})
        client = TestClient(create_app(store, api_key="secret"))
        body = request_body("m1", render_prompt("karate"))
        assert client.post("/chat/completions", json=body).status_code == status.HTTP_401_UNAUTHORIZED
        response = client.post("/chat/completions", json=body, headers={"Authorization": "Bearer secret"})
        assert response.status_code == status.HTTP_200_OK

    def test_throttle_first_requests(self, temp_output_dir):
        """The first throttled requests return 429, later ones succeed"""
        store = write_transcripts(temp_output_dir, {"m1": {"karate": "x"}})
        client = TestClient(create_app(store, throttle_first=2))
        body = request_body("m1", render_prompt("karate"))
        codes = [client.post("/chat/completions", json=body).status_code for _ in range(3)]
        assert codes == [429, 429, 200]

    def test_invalid_body(self, temp_output_dir):
        """Requests without messages are rejected"""
        client = TestClient(create_app(write_transcripts(temp_output_dir, {})))
        response = client.post("/chat/completions", json={"model": "m1", "messages": []})
        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
