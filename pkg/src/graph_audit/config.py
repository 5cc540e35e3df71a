"""
Configuration for the Audit Toolkit
Graph Hallucination Audit - LLM Graph Recall Benchmark

Module constants shared across the toolkit.
"""

from pathlib import Path

from graph_audit import __version__

# Base directory
BASE_DIR = Path(__file__).parent.parent.parent

# Data layout
DATA_DIR = BASE_DIR / "data"
GROUND_TRUTH_DIR = DATA_DIR / "ground_truth"
ATLAS_DIR = GROUND_TRUTH_DIR / "atlas"
FIXTURES_DIR = DATA_DIR / "fixtures"
REFERENCE_RANKING_PATH = FIXTURES_DIR / "leaderboard_reference.csv"

# Store layout
DEFAULT_STORE_DIR = Path("audit_store")
DEFAULT_OUT_DIR = Path("reports")
TRANSCRIPTS_FILENAME = "transcripts.jsonl"
MANIFEST_FILENAME = "manifest.json"

TOOLKIT_VERSION = __version__
DEFAULT_SEED = 0

# Logging
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Prompts
NAMED_PROMPT_TEMPLATE = 'Provide me the so called "{name}" graph as a python edge list; print it'
ATLAS_PROMPT_TEMPLATE = "Provide me with graph {index} from the Graph Atlas, as a python edge list; print it"
ATLAS_KEY_PREFIX = "atlas:"

# Named catalog entries: key -> name used in the prompt
NAMED_GRAPHS = {
    "karate": "Zachary's karate club",
    "lesmis": "Les Misérables",
}

# Bundled atlas entries; GAD averages over the first connected ones
BUNDLED_ATLAS_INDICES = (3, 6, 7, 13, 15, 50)
GAD_MAX_RESOLUTION = 5

# Parser defaults
DEFAULT_REFUSAL_CUES = ("I don't have access", "I cannot provide", "as an AI")
DEFAULT_CODE_PATTERNS = ("karate_club_graph(", "les_miserables_graph(", "graph_atlas(")

# Analysis
ISOMORPHISM_SIZE_LIMIT = 8
LABEL_PROPAGATION_MAX_SWEEPS = 100
DEFAULT_GED_BUDGET = 10 ** 7
SPECTRAL_MATRIX = "adjacency"
STD_CONVENTION = "population"

# NetLSD grid: 250 log-spaced timescales over [1e-2, 1e2]
SIGNATURE_LOG_MIN = -2
SIGNATURE_LOG_MAX = 2
SIGNATURE_POINTS = 250

# HTTP client
RETRY_BACKOFF_BASE = 1.0
RETRY_BACKOFF_FACTOR = 2.0
RETRYABLE_STATUS_CODES = (429, 500, 502, 503, 504)

# Replay server
HOST = "127.0.0.1"
PORT = 8765
