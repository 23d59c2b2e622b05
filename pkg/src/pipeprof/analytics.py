"""Pipeline Matrix analytics: usage matrix, sorting, subsetting, one-hot expansion."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyCollection,
    EmptySubset,
    MissingContributions,
    MissingMetric,
    UnknownPipelineId,
    UnknownPrimitive,
)
from .model import (
    LOWER,
    PipelineCollection,
    PrimitiveRef,
    build_vocabulary,
)


@dataclass(frozen=True)
class UsageMatrix:
    """Boolean pipeline x primitive indicator matrix."""

    pipeline_ids: tuple[str, ...]
    primitive_paths: tuple[str, ...]
    cells: np.ndarray  # bool, rows aligned with pipeline_ids
    column_families: tuple[str, ...]


@dataclass(frozen=True)
class MetricVector:
    metric: str
    values: np.ndarray  # float, aligned with UsageMatrix rows
    direction: str


@dataclass(frozen=True)
class SortSpec:
    """Row and column ordering keys for the matrix view."""

    row_key: str = "metric"  # "metric" | "source_grouped_then_metric"
    column_key: str = "family"  # "family" | "contribution" | "usage_count"


@dataclass(frozen=True)
class OneHotMatrix:
    """Per-primitive expansion: one column per observed (hyperparam, value) pair."""

    primitive: PrimitiveRef
    columns: tuple[tuple[str, str], ...]
    cells: np.ndarray  # bool, same pipeline rows as the usage matrix
    pipeline_ids: tuple[str, ...] = field(default=())


def build_usage_matrix(c: PipelineCollection) -> UsageMatrix:
    if not c.pipelines:
        raise EmptyCollection("cannot build a matrix for an empty collection")
    paths = tuple(ref.path for ref in c.vocabulary)
    col_index = {path: j for j, path in enumerate(paths)}
    cells = np.zeros((len(c.pipelines), len(paths)), dtype=bool)
    for i, p in enumerate(c.pipelines):
        for path in p.primitive_paths():
            cells[i, col_index[path]] = True
    return UsageMatrix(
        pipeline_ids=tuple(p.id for p in c.pipelines),
        primitive_paths=paths,
        cells=cells,
        column_families=tuple(ref.family for ref in c.vocabulary),
    )


def metric_vector(
    c: PipelineCollection, metric: str, time_source: str = "predict"
) -> MetricVector:
    """Aligned per-pipeline metric values.

    The pseudo-metric ``time`` reads the timing fields (prediction time by
    default, ``time_source="train"`` for training time).
    """
    if metric == "time":
        attr = "predict_time_s" if time_source == "predict" else "train_time_s"
        missing = [p.id for p in c.pipelines if getattr(p, attr) is None]
        if missing:
            raise MissingMetric(metric, missing)
        values = np.array([getattr(p, attr) for p in c.pipelines], dtype=float)
        return MetricVector(metric=metric, values=values, direction=LOWER)

    missing = [p.id for p in c.pipelines if p.score(metric) is None]
    if missing:
        raise MissingMetric(metric, missing)
    scores = [p.score(metric) for p in c.pipelines]
    values = np.array([s.value for s in scores], dtype=float)
    return MetricVector(metric=metric, values=values, direction=scores[0].direction)


def _adjusted(values: np.ndarray, direction: str) -> np.ndarray:
    """Values mapped so ascending order means best-first."""
    return values if direction == LOWER else -values


def sort_rows(
    m: UsageMatrix,
    mv: MetricVector,
    spec: SortSpec,
    sources: list[str] | None = None,
) -> list[int]:
    """Row permutation, best-first; pure (the matrix is not touched)."""
    adj = _adjusted(mv.values, mv.direction)
    indices = range(len(m.pipeline_ids))
    if spec.row_key == "source_grouped_then_metric":
        if sources is None:
            raise ValueError("source-grouped sort needs per-row sources")
        best: dict[str, tuple[float, str]] = {}
        for i in indices:
            key = (adj[i], m.pipeline_ids[i])
            if sources[i] not in best or key < best[sources[i]]:
                best[sources[i]] = key
        return sorted(
            indices, key=lambda i: (best[sources[i]], adj[i], m.pipeline_ids[i])
        )
    return sorted(indices, key=lambda i: (adj[i], m.pipeline_ids[i]))


def sort_columns(
    m: UsageMatrix,
    contributions=None,
    spec: SortSpec = SortSpec(),
) -> tuple[list[int], list[int]]:
    """Column permutation plus family-boundary indices (family sort only).

    A boundary index ``i`` means a separator is drawn after position ``i`` of
    the permuted order.
    """
    indices = range(len(m.primitive_paths))
    if spec.column_key == "family":
        perm = sorted(
            indices, key=lambda j: (m.column_families[j], m.primitive_paths[j])
        )
        boundaries = [
            pos
            for pos in range(len(perm) - 1)
            if m.column_families[perm[pos]] != m.column_families[perm[pos + 1]]
        ]
        return perm, boundaries
    if spec.column_key == "contribution":
        if contributions is None:
            raise MissingContributions("contribution sort needs a contribution report")
        def value(j):
            entry = contributions.entries.get(m.primitive_paths[j])
            return entry.value if entry is not None and entry.value is not None else 0.0
        perm = sorted(indices, key=lambda j: (-value(j), m.primitive_paths[j]))
        return perm, []
    if spec.column_key == "usage_count":
        counts = m.cells.sum(axis=0)
        perm = sorted(indices, key=lambda j: (-int(counts[j]), m.primitive_paths[j]))
        return perm, []
    raise ValueError(f"unknown column key {spec.column_key!r}")


def expand_hyperparameters(c: PipelineCollection, primitive: str) -> OneHotMatrix:
    """One-hot matrix over observed (hyperparam name, canonical value) pairs."""
    ref = next((r for r in c.vocabulary if r.path == primitive), None)
    if ref is None:
        raise UnknownPrimitive(f"primitive {primitive!r} not in vocabulary")

    observed: dict[tuple[str, str], set[int]] = {}
    for i, p in enumerate(c.pipelines):
        for step in p.steps:
            if step.primitive.path != primitive:
                continue
            for hp in step.hyperparams:
                observed.setdefault((hp.name, hp.value), set()).add(i)

    columns = tuple(sorted(observed))
    cells = np.zeros((len(c.pipelines), len(columns)), dtype=bool)
    for j, col in enumerate(columns):
        for i in observed[col]:
            cells[i, j] = True
    return OneHotMatrix(
        primitive=ref,
        columns=columns,
        cells=cells,
        pipeline_ids=tuple(p.id for p in c.pipelines),
    )


def subset(c: PipelineCollection, keep: list[str]) -> PipelineCollection:
    """New collection restricted to the kept pipeline ids; vocabulary recomputed."""
    if not keep:
        raise EmptySubset("subset must keep at least one pipeline")
    known = {p.id for p in c.pipelines}
    unknown = sorted(set(keep) - known)
    if unknown:
        raise UnknownPipelineId(f"unknown pipeline ids: {', '.join(unknown)}")
    keep_set = set(keep)
    kept = tuple(p for p in c.pipelines if p.id in keep_set)
    return PipelineCollection(
        id=c.id,
        problem=c.problem,
        pipelines=kept,
        vocabulary=build_vocabulary(list(kept)),
    )


def matrix_to_csv(m: UsageMatrix) -> str:
    buf = io.StringIO()
    buf.write("pipeline_id," + ",".join(m.primitive_paths) + "\n")
    for i, pid in enumerate(m.pipeline_ids):
        buf.write(pid + "," + ",".join("1" if v else "0" for v in m.cells[i]) + "\n")
    return buf.getvalue()


def onehot_to_csv(m: OneHotMatrix) -> str:
    buf = io.StringIO()
    headers = [f"{name}={value}" for name, value in m.columns]
    buf.write("pipeline_id," + ",".join(headers) + "\n")
    for i, pid in enumerate(m.pipeline_ids):
        buf.write(pid + "," + ",".join("1" if v else "0" for v in m.cells[i]) + "\n")
    return buf.getvalue()
