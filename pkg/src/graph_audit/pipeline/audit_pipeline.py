"""
Audit Pipeline Orchestrator
Graph Hallucination Audit - LLM Graph Recall Benchmark

Orchestrates the audit over one transcript store:
1. Fetch (the only writer of transcripts and the manifest)
2. Parse stored responses into graphs
3. Analyze and write reports: statistics, diffs, GAD rankings,
   rank comparison, spectral distances and signatures
"""

import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from graph_audit.analysis.distances import gad, graph_diff, spearman_rank_correlation, spectral_distance
from graph_audit.analysis.metrics import compute_metrics
from graph_audit.analysis.signatures import default_timescales, heat_trace_signature, signature_distance_matrix
from graph_audit.client.llm_client import LLMClient, render_prompt
from graph_audit.client.transcript_store import TranscriptStore, cache_key
from graph_audit.config import (
    DEFAULT_OUT_DIR,
    DEFAULT_STORE_DIR,
    SIGNATURE_LOG_MAX,
    SIGNATURE_LOG_MIN,
    SIGNATURE_POINTS,
    TOOLKIT_VERSION,
)
from graph_audit.core.graph import Graph, from_edge_list
from graph_audit.core.ground_truth import atlas_key, atlas_selection, load_ground_truth
from graph_audit.exceptions import (
    ConfigError,
    KeySetMismatchError,
    LLMClientError,
    TranscriptNotFoundError,
    UnknownGraphError,
)
from graph_audit.models.records import (
    AuditConfig,
    Classification,
    DiffReport,
    EndpointConfig,
    GadScore,
    ManifestEntry,
    MetricsRecord,
    ParseResult,
    RankingEntry,
    RankingTable,
    RunManifest,
)
from graph_audit.parsing.response_parser import ResponseParser
from graph_audit.pipeline import reports

logger = logging.getLogger(__name__)

REPLAY_BASE_URL = "http://replay.invalid"

ClientFactory = Callable[[EndpointConfig, TranscriptStore, bool], LLMClient]


def _default_client_factory(endpoint: EndpointConfig, store: TranscriptStore, replay: bool) -> LLMClient:
    return LLMClient(endpoint, store=store, replay=replay)


class AuditPipeline:
    """Runs audit commands against one transcript store and output directory"""

    def __init__(
        self,
        store_dir: Union[str, Path] = DEFAULT_STORE_DIR,
        out_dir: Union[str, Path] = DEFAULT_OUT_DIR,
        config: Optional[AuditConfig] = None,
        seed: Optional[int] = None,
        client_factory: ClientFactory = _default_client_factory,
    ):
        """
        Initialize the pipeline

        Args:
            store_dir: Transcript store directory
            out_dir: Report directory
            config: Run configuration (defaults if None)
            seed: Overrides config.seed when given
            client_factory: Builds the endpoint client for each model
        """
        self.store = TranscriptStore(store_dir)
        self.out_dir = Path(out_dir)
        self.config = config or AuditConfig()
        self.seed = self.config.seed if seed is None else seed
        self.parser = ResponseParser(self.config.parser)
        self.client_factory = client_factory
        self.stats = {
            'fetched': 0,
            'cached': 0,
            'failed': 0,
            'skipped': 0,
            'reports': [],
        }

    # ============================================================
    # Shared helpers
    # ============================================================

    def _manifest(self) -> RunManifest:
        manifest = self.store.load_manifest()
        if manifest is None:
            raise ConfigError(f"No manifest in {self.store.root}; run fetch first")
        return manifest

    def _metadata(self, manifest: RunManifest) -> Dict:
        return {
            "toolkit_version": TOOLKIT_VERSION,
            "seed": self.seed,
            "manifest_digest": manifest.digest(),
        }

    def parse_response(self, model_id: str, target: str) -> Tuple[Optional[ParseResult], str]:
        """
        Parsed stored response of a model for a target

        Returns:
            (parse result, "") or (None, reason it is missing)
        """
        transcript = self.store.get(cache_key(model_id, render_prompt(target)))
        if transcript is None:
            return None, "no transcript"
        return self.parser.extract_edge_list(transcript.response_text), ""

    def model_graph(self, model_id: str, target: str) -> Tuple[Optional[Graph], str]:
        """
        Graph a model returned for a target

        Returns:
            (graph, "") or (None, reason it is unusable)
        """
        result, reason = self.parse_response(model_id, target)
        if result is None:
            return None, reason
        if result.classification != Classification.EDGE_LIST:
            return None, result.classification.value
        graph, _, _ = from_edge_list(result.edges)
        return graph, ""

    # ============================================================
    # Fetch
    # ============================================================

    def _endpoint(self, model_id: str, replay: bool) -> Optional[EndpointConfig]:
        endpoint = self.config.endpoint_for(model_id)
        if endpoint is None and replay:
            endpoint = EndpointConfig(base_url=REPLAY_BASE_URL, model_id=model_id)
        return endpoint

    def cmd_fetch(self, models: List[str], targets: List[str], replay: bool = False) -> RunManifest:
        """
        Fetch one transcript per (model, target) and update the manifest

        Failures are recorded per pair; the batch always completes.
        """
        logger.info("=" * 60)
        logger.info(f"FETCH: {len(models)} models x {len(targets)} targets ({'replay' if replay else 'live'})")
        logger.info("=" * 60)

        entries: List[ManifestEntry] = []
        new_fetches = 0
        for model_id in models:
            endpoint = self._endpoint(model_id, replay)
            client = self.client_factory(endpoint, self.store, replay) if endpoint is not None else None
            for target in targets:
                entry = ManifestEntry(model_id=model_id, target=target)
                try:
                    if client is None:
                        raise ConfigError(f"No endpoint configured for model {model_id}")
                    prompt = render_prompt(target)
                    transcript = client.fetch(prompt)
                    entry.cache_key = cache_key(model_id, prompt)
                    entry.classification = self.parser.classify_response(transcript.response_text)
                    entry.cached = transcript.source == "replay"
                    entry.retries = client.stats['last_retries']
                    if entry.cached:
                        self.stats['cached'] += 1
                    else:
                        new_fetches += 1
                        self.stats['fetched'] += 1
                except (UnknownGraphError, ConfigError, LLMClientError, TranscriptNotFoundError) as e:
                    entry.status = "error"
                    entry.error = str(e)
                    self.stats['failed'] += 1
                    logger.error(f"Fetch failed for {model_id} / {target}: {e}")
                entries.append(entry)

        manifest = self.store.load_manifest() or RunManifest(toolkit_version=TOOLKIT_VERSION, seed=self.seed)
        manifest.toolkit_version = TOOLKIT_VERSION
        manifest.seed = self.seed
        manifest.config_snapshot = self.config.model_dump(mode="json")
        manifest.merge(entries)
        manifest.new_fetches = new_fetches
        self.store.save_manifest(manifest)
        logger.info(f"Fetch complete - {new_fetches} new, {self.stats['cached']} cached, {self.stats['failed']} failed")
        return manifest

    # ============================================================
    # Statistics
    # ============================================================

    def cmd_stats(self, reference: str) -> List[MetricsRecord]:
        """
        Statistics table against a reference graph

        Reference row first, then models by degree-sequence distance.
        An empty model set yields a header-only table.
        """
        manifest = self._manifest()
        ref = load_ground_truth(reference)

        rows: List[MetricsRecord] = []
        skipped: Dict[str, str] = {}
        for model_id in manifest.model_ids:
            if manifest.entry(model_id, reference) is None:
                continue
            graph, reason = self.model_graph(model_id, reference)
            if graph is None:
                skipped[model_id] = reason
                continue
            rows.append(compute_metrics(model_id, graph, ref, self.seed))
        rows.sort(key=lambda r: (r.degseq_distance, r.name))

        if rows or skipped:
            rows.insert(0, compute_metrics(f"{reference} (reference)", ref, ref, self.seed))
        self.stats['skipped'] += len(skipped)
        path = reports.write_metrics_table(self.out_dir, reference, rows, skipped, self._metadata(manifest))
        self.stats['reports'].append(str(path))
        return rows

    # ============================================================
    # Diff
    # ============================================================

    def cmd_diff(self, model_id: str, reference: str) -> Optional[DiffReport]:
        """Intersection, added and missing edges of one model's output"""
        self._manifest()
        ref = load_ground_truth(reference)
        graph, reason = self.model_graph(model_id, reference)
        if graph is None:
            logger.error(f"Cannot diff {model_id} against {reference}: {reason}")
            self.stats['failed'] += 1
            return None
        report = graph_diff(graph, ref)
        path = reports.write_diff(self.out_dir, model_id, reference, report)
        self.stats['reports'].append(str(path))
        return report

    # ============================================================
    # Graph Atlas Distance
    # ============================================================

    def cmd_gad(self, resolution: int) -> RankingTable:
        """
        GAD score per model over the first `resolution` atlas graphs

        Models missing a usable response for any selected graph are excluded
        with the reason.
        """
        manifest = self._manifest()
        indices = atlas_selection(resolution)
        truths = {i: load_ground_truth(atlas_key(i)) for i in indices}

        scores: List[GadScore] = []
        excluded: Dict[str, str] = {}
        for model_id in manifest.model_ids:
            outputs: Dict[int, Graph] = {}
            for index in indices:
                graph, reason = self.model_graph(model_id, atlas_key(index))
                if graph is None:
                    excluded[model_id] = f"{atlas_key(index)}: {reason}"
                    break
                outputs[index] = graph
            if model_id in excluded:
                logger.warning(f"Excluding {model_id} from GAD ranking ({excluded[model_id]})")
                continue
            scores.append(gad(outputs, truths, budget=self.config.ged_budget, model_id=model_id))

        scores.sort(key=lambda s: (s.mean, s.model_id))
        ranking = RankingTable(
            entries=[
                RankingEntry(rank=i + 1, model_id=s.model_id, mean=s.mean, std=s.std, exact=s.exact)
                for i, s in enumerate(scores)
            ],
            excluded=excluded,
        )
        self.stats['failed'] += len(excluded)
        metadata = {**self._metadata(manifest), "resolution": resolution, "atlas_indices": indices}
        reports.write_gad(self.out_dir, scores, ranking, metadata)
        self.stats['reports'].append(str(self.out_dir / "gad_ranking.csv"))
        return ranking

    # ============================================================
    # Rank comparison
    # ============================================================

    def cmd_rank_compare(self, reference_csv: Union[str, Path], ranking_csv: Optional[Union[str, Path]] = None) -> float:
        """
        Spearman correlation between the GAD ranking and a reference ranking

        Raises:
            KeySetMismatchError: when the rankings name different models
        """
        ranking_path = Path(ranking_csv) if ranking_csv is not None else self.out_dir / "gad_ranking.csv"
        computed = reports.read_ranking_csv(ranking_path)
        reference = reports.read_ranking_csv(Path(reference_csv))
        try:
            rho = spearman_rank_correlation(computed, reference)
        except KeySetMismatchError as e:
            logger.error(f"Rank comparison impossible: {e}")
            self.stats['failed'] += 1
            raise

        manifest = self.store.load_manifest()
        metadata = self._metadata(manifest) if manifest is not None else {"toolkit_version": TOOLKIT_VERSION}
        reports.write_json(
            self.out_dir / "rank_compare.json",
            {
                **metadata,
                "spearman": rho,
                "computed_ranking": computed,
                "reference_ranking": reference,
                "reference_source": Path(reference_csv).name,
            },
        )
        logger.info(f"Spearman rank correlation: {rho:.4f}")
        return rho

    # ============================================================
    # Spectral distances
    # ============================================================

    def cmd_spectral(self, reference: str) -> Dict[str, float]:
        """Adjacency-spectrum distance of every usable model output to a reference"""
        manifest = self._manifest()
        ref = load_ground_truth(reference)
        distances: Dict[str, float] = {}
        skipped: Dict[str, str] = {}
        for model_id in manifest.model_ids:
            if manifest.entry(model_id, reference) is None:
                continue
            graph, reason = self.model_graph(model_id, reference)
            if graph is None:
                skipped[model_id] = reason
                continue
            distances[model_id] = spectral_distance(graph, ref)
        self.stats['skipped'] += len(skipped)
        metadata = {**self._metadata(manifest), "matrix": self.config.spectral_matrix, "skipped": skipped}
        path = reports.write_spectral(self.out_dir, reference, distances, metadata)
        self.stats['reports'].append(str(path))
        return distances

    # ============================================================
    # Signatures
    # ============================================================

    def cmd_embed(self, target: str) -> Tuple[List[str], np.ndarray]:
        """
        Heat-trace signatures of a reference graph and every usable model output

        Returns:
            (row names, pairwise distance matrix)
        """
        manifest = self._manifest()
        normalization = self.config.signatures.normalization
        signatures = {target: heat_trace_signature(load_ground_truth(target), normalization)}
        skipped: Dict[str, str] = {}
        for model_id in manifest.model_ids:
            if manifest.entry(model_id, target) is None:
                continue
            graph, reason = self.model_graph(model_id, target)
            if graph is None:
                skipped[model_id] = reason
                continue
            signatures[model_id] = heat_trace_signature(graph, normalization)

        names, distances = signature_distance_matrix(signatures)
        values = np.array([signatures[name].values for name in names])
        metadata = {
            **self._metadata(manifest),
            "target": target,
            "normalization": normalization,
            "timescales": {"min": 10.0 ** SIGNATURE_LOG_MIN, "max": 10.0 ** SIGNATURE_LOG_MAX, "points": SIGNATURE_POINTS},
            "skipped": skipped,
        }
        reports.write_signatures(self.out_dir, names, default_timescales(), values, distances, metadata)
        self.stats['reports'].append(str(self.out_dir / "signatures.csv"))
        return names, distances
