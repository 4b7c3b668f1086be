"""Versioned JSON report documents shared by the CLI, service, and UI.

Every document carries ``format_version`` and a ``kind`` tag; writers are
deterministic (sorted keys, stable float repr) so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import MissingInputError, VersionMismatchError

REPORT_FORMAT_VERSION = 1

KIND_MOMENTS = "class_moments"
KIND_GROUP_COUNTS = "group_counts"
KIND_TERMS = "term_frequencies"
KIND_CORRELATION = "correlation_matrix"
KIND_FIDELITY = "fidelity"
KIND_BENCHMARK = "benchmark"
KIND_EXPLANATION = "explanation"
KIND_IMPORTANCE = "importance"
KIND_DEPENDENCE = "dependence"
KIND_BEESWARM = "beeswarm"
KIND_MANIFEST = "run_manifest"


def dumps_report(kind: str, payload: dict) -> str:
    doc = {"format_version": REPORT_FORMAT_VERSION, "kind": kind}
    doc.update(payload)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_report(path: str | Path, kind: str, payload: dict) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(dumps_report(kind, payload), encoding="utf-8")
    return p


def load_report(path: str | Path, expected_kind: str | None = None) -> dict:
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"report not found: {p}")
    doc = json.loads(p.read_text(encoding="utf-8"))
    version = doc.get("format_version")
    if version != REPORT_FORMAT_VERSION:
        raise VersionMismatchError(
            f"report format_version {version!r} unsupported (expected {REPORT_FORMAT_VERSION})"
        )
    if expected_kind is not None and doc.get("kind") != expected_kind:
        raise VersionMismatchError(f"expected report kind {expected_kind!r}, got {doc.get('kind')!r}")
    return doc


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def moments_payload(moments) -> dict:
    return {
        "std_kind": "population",
        "features": [
            {
                "feature": name,
                "not_suicide": list(moments.moments[name][0]),
                "suicide": list(moments.moments[name][1]),
            }
            for name in moments.feature_names
        ],
    }


def group_counts_payload(feature: str, rows) -> dict:
    return {
        "feature": feature,
        "rows": [
            {
                "code": r.code,
                "label": r.label,
                "suicide_count": r.suicide_count,
                "nonsuicide_count": r.nonsuicide_count,
            }
            for r in rows
        ],
    }


def terms_payload(column: str, terms) -> dict:
    return {"column": column, "terms": [[term, count] for term, count in terms.terms]}


def correlation_payload(matrix) -> dict:
    return {
        "method": "spearman",
        "names": list(matrix.names),
        "values": [float(v) for v in matrix.values.ravel()],
        "constant_columns": list(matrix.constant_columns),
    }


def fidelity_payload(report) -> dict:
    return {
        "seeds": list(report.seeds),
        "notes": report.notes,
        "max_delta_mean": report.max_delta_mean,
        "max_delta_std": report.max_delta_std,
        "rows": [
            {
                "feature": name,
                "class_label": label,
                "original": list(report.rows[(name, label)]["original"]),
                "synthetic": list(report.rows[(name, label)]["synthetic"]),
                "delta_mean": report.rows[(name, label)]["delta_mean"],
                "delta_std": report.rows[(name, label)]["delta_std"],
            }
            for name in report.feature_names
            for label in (0, 1)
        ],
    }


def explanation_payload(explanation) -> dict:
    doc = {
        "base_value": explanation.base_value,
        "prediction": explanation.prediction,
        "output_scale": explanation.output_scale,
        "method": explanation.method,
        "records": explanation.to_records(),
    }
    if explanation.std_errors is not None:
        doc["std_errors"] = [float(v) for v in explanation.std_errors]
    if explanation.residual_before_adjustment is not None:
        doc["residual_before_adjustment"] = explanation.residual_before_adjustment
    return doc


def importance_payload(importance) -> dict:
    return {
        "method": importance.method,
        "items": [
            {"feature": name, "importance": float(importance.importances[j])}
            for j, name in enumerate(importance.feature_names)
        ],
        "ranking": list(importance.ranking),
    }


def dependence_payload(dep) -> dict:
    return {
        "feature": dep.feature,
        "pairs": [[float(v), float(p)] for v, p in zip(dep.values, dep.phi)],
        "summaries": list(dep.summaries),
    }
