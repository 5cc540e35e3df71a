"""
Report Writers
Graph Hallucination Audit - LLM Graph Recall Benchmark

CSV tables (two-decimal human tables via pandas), full-precision JSON
sidecars, edge-list diffs and DOT renderings.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from graph_audit.core.graph import write_edge_list
from graph_audit.models.records import DiffReport, GadScore, MetricsRecord, RankingTable

logger = logging.getLogger(__name__)

METRICS_COLUMNS = [
    "model",
    "node_count",
    "edge_count",
    "density",
    "assortativity",
    "modularity",
    "degseq_distance",
]
RANKING_COLUMNS = ["rank", "model_id", "mean", "std", "exact"]
SPECTRAL_COLUMNS = ["model_id", "spectral_distance"]
TABLE_FLOAT_FORMAT = "%.2f"


def slug(name: str) -> str:
    """File-name-safe rendering of a model id or catalog key"""
    return re.sub(r"[^A-Za-z0-9._-]", "_", name)


def write_json(path: Path, payload: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def _write_table(path: Path, df: pd.DataFrame, float_format: str = TABLE_FLOAT_FORMAT) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=float_format, na_rep="", lineterminator="\n")
    logger.info(f"Wrote {len(df)} rows to {path}")


# ============================================================
# Statistics
# ============================================================

def write_metrics_table(
    out_dir: Path,
    reference: str,
    rows: Sequence[MetricsRecord],
    skipped: Dict[str, str],
    metadata: Dict[str, Any],
) -> Path:
    """
    stats_<reference>.csv (two decimals, empty cell for undefined values)
    and stats_<reference>.json (full precision)
    """
    records = [
        {
            "model": r.name,
            "node_count": r.node_count,
            "edge_count": r.edge_count,
            "density": r.density,
            "assortativity": r.assortativity,
            "modularity": r.modularity,
            "degseq_distance": r.degseq_distance,
        }
        for r in rows
    ]
    df = pd.DataFrame.from_records(records, columns=METRICS_COLUMNS)
    df[["assortativity", "modularity"]] = df[["assortativity", "modularity"]].astype(float)
    csv_path = out_dir / f"stats_{slug(reference)}.csv"
    _write_table(csv_path, df)

    write_json(
        out_dir / f"stats_{slug(reference)}.json",
        {
            **metadata,
            "reference": reference,
            "rows": [r.model_dump(mode="json") for r in rows],
            "skipped": [{"model_id": m, "reason": reason} for m, reason in sorted(skipped.items())],
        },
    )
    return csv_path


# ============================================================
# Diffs
# ============================================================

def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_dot(report: DiffReport, name: str = "diff") -> str:
    """DOT graph: shared edges plain, added red dashed, missing gray dotted"""
    lines = [f"graph {_dot_id(name)} {{"]
    for a, b in report.intersection:
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)};")
    for a, b in report.added:
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [color=red, style=dashed];")
    for a, b in report.missing:
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [color=gray, style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_diff(out_dir: Path, model_id: str, reference: str, report: DiffReport) -> Path:
    """diff_<model>_<reference>/ with three edge-list files and diff.dot"""
    target = out_dir / f"diff_{slug(model_id)}_{slug(reference)}"
    target.mkdir(parents=True, exist_ok=True)
    write_edge_list(target / "intersection.edges", report.intersection)
    write_edge_list(target / "added.edges", report.added)
    write_edge_list(target / "missing.edges", report.missing)
    (target / "diff.dot").write_text(format_dot(report, f"{model_id} vs {reference}"), encoding="utf-8")
    logger.info(
        f"Diff {model_id} vs {reference}: {len(report.intersection)} shared, "
        f"{len(report.added)} added, {len(report.missing)} missing"
    )
    return target


# ============================================================
# GAD and rankings
# ============================================================

def gad_score_payload(score: GadScore) -> Dict[str, Any]:
    return {
        "model_id": score.model_id,
        "resolution": score.resolution,
        "per_graph": {
            str(index): {"distance": r.distance, "exact": r.exact, "isomorphic": score.isomorphic.get(index)}
            for index, r in sorted(score.per_graph.items())
        },
        "mean": score.mean,
        "std": score.std,
        "std_convention": score.std_convention,
    }


def write_gad(out_dir: Path, scores: List[GadScore], ranking: RankingTable, metadata: Dict[str, Any]) -> None:
    """gad_scores.json and gad_ranking.csv"""
    by_model = {s.model_id: s for s in scores}
    write_json(
        out_dir / "gad_scores.json",
        {
            **metadata,
            "scores": [gad_score_payload(by_model[m]) for m in ranking.model_ids],
            "excluded": dict(sorted(ranking.excluded.items())),
        },
    )
    df = pd.DataFrame.from_records([e.model_dump() for e in ranking.entries], columns=RANKING_COLUMNS)
    _write_table(out_dir / "gad_ranking.csv", df)


def read_ranking_csv(path: Path) -> List[str]:
    """Model ids of a rank,model_id CSV in rank order"""
    df = pd.read_csv(path, dtype={"model_id": str})
    missing = {"rank", "model_id"} - set(df.columns)
    if missing:
        raise ValueError(f"{path} lacks columns {sorted(missing)}")
    return df.sort_values(["rank", "model_id"], kind="mergesort")["model_id"].tolist()


# ============================================================
# Spectral distances and signatures
# ============================================================

def write_spectral(out_dir: Path, reference: str, distances: Dict[str, float], metadata: Dict[str, Any]) -> Path:
    """spectral_<reference>.csv sorted ascending, plus JSON sidecar"""
    ordered = sorted(distances.items(), key=lambda item: (item[1], item[0]))
    df = pd.DataFrame(ordered, columns=SPECTRAL_COLUMNS)
    csv_path = out_dir / f"spectral_{slug(reference)}.csv"
    _write_table(csv_path, df)
    write_json(
        out_dir / f"spectral_{slug(reference)}.json",
        {**metadata, "reference": reference, "distances": [{"model_id": m, "spectral_distance": d} for m, d in ordered]},
    )
    return csv_path


def write_signatures(
    out_dir: Path,
    names: List[str],
    timescales: np.ndarray,
    values: np.ndarray,
    distances: np.ndarray,
    metadata: Dict[str, Any],
) -> None:
    """signatures.csv (graphs x timescales), signature_distances.csv and signatures.json"""
    signature_df = pd.DataFrame(values, columns=[f"{t:.6g}" for t in timescales])
    signature_df.insert(0, "graph", names)
    _write_table(out_dir / "signatures.csv", signature_df, float_format="%.12g")

    distance_df = pd.DataFrame(distances, columns=names)
    distance_df.insert(0, "graph", names)
    _write_table(out_dir / "signature_distances.csv", distance_df, float_format="%.12g")

    write_json(out_dir / "signatures.json", {**metadata, "graphs": names})
