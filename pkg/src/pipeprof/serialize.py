"""Shared payload builders so CLI report files and service responses are
byte-identical for the same inputs."""

from __future__ import annotations

import json

from .analytics import (
    SortSpec,
    build_usage_matrix,
    expand_hyperparameters,
    metric_vector,
    sort_columns,
    sort_rows,
)
from .contribution import (
    ContributionReport,
    combined_contribution,
    primitive_contributions,
)
from .merge import MergedGraph, merged_to_node_link
from .model import PipelineCollection, serialize_pipeline

SCHEMA_VERSION = "1"


def dumps(payload: dict) -> bytes:
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode()


def _entries_dict(report: ContributionReport) -> dict:
    return {
        path: {"value": entry.value, "n1": entry.n1, "n0": entry.n0}
        for path, entry in sorted(report.entries.items())
    }


def matrix_payload(
    c: PipelineCollection,
    metric: str | None = None,
    rows: str = "metric",
    cols: str = "family",
) -> dict:
    metric = metric or c.problem.primary_metric
    usage = build_usage_matrix(c)
    mv = metric_vector(c, metric)
    report = primitive_contributions(c, metric)
    spec = SortSpec(row_key=rows, column_key=cols)
    sources = [p.source for p in c.pipelines]
    row_order = sort_rows(usage, mv, spec, sources=sources)
    column_order, boundaries = sort_columns(usage, report, spec)
    return {
        "schema_version": SCHEMA_VERSION,
        "collection_id": c.id,
        "pipeline_ids": list(usage.pipeline_ids),
        "sources": sources,
        "primitive_paths": list(usage.primitive_paths),
        "families": list(usage.column_families),
        "cells": [[int(v) for v in row] for row in usage.cells],
        "metric": {
            "name": mv.metric,
            "direction": mv.direction,
            "values": [float(v) for v in mv.values],
        },
        "contributions": _entries_dict(report),
        "row_order": list(row_order),
        "column_order": list(column_order),
        "family_boundaries": list(boundaries),
    }


def contributions_payload(c: PipelineCollection, metric: str | None = None) -> dict:
    metric = metric or c.problem.primary_metric
    report = primitive_contributions(c, metric)
    return {
        "schema_version": SCHEMA_VERSION,
        "metric": metric,
        "entries": _entries_dict(report),
    }


def cpc_payload(c: PipelineCollection, metric: str | None = None, k: int = 3) -> dict:
    metric = metric or c.problem.primary_metric
    report = combined_contribution(c, metric, k)
    return {
        "schema_version": SCHEMA_VERSION,
        "metric": report.metric,
        "k": report.k,
        "subsets_evaluated": report.subsets_evaluated,
        "groups": [
            {
                "members": list(g.members),
                "correlation": g.correlation,
                "n_joint_usage": g.n_joint_usage,
            }
            for g in report.groups
        ],
    }


def onehot_payload(c: PipelineCollection, primitive: str) -> dict:
    m = expand_hyperparameters(c, primitive)
    return {
        "schema_version": SCHEMA_VERSION,
        "primitive": {
            "path": m.primitive.path,
            "name": m.primitive.name,
            "family": m.primitive.family,
        },
        "columns": [[name, value] for name, value in m.columns],
        "pipeline_ids": list(m.pipeline_ids),
        "cells": [[int(v) for v in row] for row in m.cells],
    }


def best_scores_payload(c: PipelineCollection, metric: str | None = None) -> dict:
    metric = metric or c.problem.primary_metric
    mv = metric_vector(c, metric)
    best: dict[str, tuple[float, str]] = {}
    for p, value in zip(c.pipelines, mv.values):
        adjusted = value if mv.direction == "lower_better" else -value
        key = (adjusted, p.id)
        if p.source not in best or key < best[p.source]:
            best[p.source] = key
    rows = []
    for source in sorted(best):
        adjusted, pid = best[source]
        value = adjusted if mv.direction == "lower_better" else -adjusted
        rows.append({"source": source, "pipeline_id": pid, "value": float(value)})
    return {"schema_version": SCHEMA_VERSION, "metric": metric, "rows": rows}


def merged_payload(g: MergedGraph) -> dict:
    return merged_to_node_link(g)


def collection_payload(c: PipelineCollection) -> dict:
    """Re-ingestable bundle document for a collection."""
    return {
        "schema_version": SCHEMA_VERSION,
        "id": c.id,
        "problem": {
            "task_type": c.problem.task_type,
            "dataset_name": c.problem.dataset_name,
            "primary_metric": c.problem.primary_metric,
        },
        "pipelines": [serialize_pipeline(p) for p in c.pipelines],
    }
