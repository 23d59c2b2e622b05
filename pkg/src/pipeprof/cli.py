"""Batch command-line front door: ingest, report, merge, export, serve."""

from __future__ import annotations

import json
import logging
import os
import shutil
import sys
from pathlib import Path

import click

from . import serialize
from .analytics import build_usage_matrix, matrix_to_csv, subset
from .errors import (
    EmptySubset,
    KOutOfRange,
    MissingContributions,
    MissingMetric,
    PipeprofError,
    UnknownPipelineId,
    UnknownPrimitive,
)
from .merge import merge_many, merged_from_dag, merged_to_dot
from .model import PipelineCollection, derive_dag, load_collection

log = logging.getLogger("pipeprof")

EXIT_IO = 2
EXIT_VALIDATION = 3
EXIT_PRECONDITION = 4
EXIT_UNKNOWN_REF = 5


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _exit_code(err: Exception) -> int:
    if isinstance(err, (OSError, json.JSONDecodeError)):
        return EXIT_IO
    if isinstance(err, (MissingMetric, KOutOfRange, MissingContributions, EmptySubset)):
        return EXIT_PRECONDITION
    if isinstance(err, (UnknownPipelineId, UnknownPrimitive)):
        return EXIT_UNKNOWN_REF
    if isinstance(err, PipeprofError):
        return EXIT_VALIDATION
    raise err


def load_bundle(bundle_dir: str | Path) -> PipelineCollection:
    bundle_dir = Path(bundle_dir)
    doc = json.loads((bundle_dir / "collection.json").read_text())
    return load_collection(
        doc["pipelines"], doc["problem"], collection_id=doc.get("id")
    )


def write_bundle(c: PipelineCollection, out_dir: Path, originals: list[Path] = ()):
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "collection.json").write_bytes(
        serialize.dumps(serialize.collection_payload(c))
    )
    if originals:
        orig_dir = out_dir / "originals"
        orig_dir.mkdir(exist_ok=True)
        for path in originals:
            shutil.copy(path, orig_dir / path.name)


@click.group()
def main():
    """Analysis engine for collections of AutoML-generated pipelines."""
    level = os.environ.get("PIPEPROF_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path())
@click.option("--task-type", default="classification")
@click.option("--dataset", default="unknown")
@click.option("--metric", default="accuracy", help="Primary metric of the problem.")
@click.option("--out", required=True, type=click.Path(), help="Bundle directory.")
def ingest(paths, task_type, dataset, metric, out):
    """Parse pipeline documents into a validated collection bundle."""
    documents = []
    for p in paths:
        path = Path(p)
        try:
            documents.append(path.read_text())
        except OSError as e:
            _fail(EXIT_IO, f"cannot read {path}: {e}")
    try:
        collection = load_collection(
            documents,
            {
                "task_type": task_type,
                "dataset_name": dataset,
                "primary_metric": metric,
            },
        )
        write_bundle(collection, Path(out), [Path(p) for p in paths])
    except Exception as e:  # noqa: BLE001 - mapped to exit codes
        _fail(_exit_code(e), str(e))
    metrics = sorted({s.metric for p in collection.pipelines for s in p.scores})
    click.echo(
        f"{len(collection.pipelines)} pipelines, "
        f"{len(collection.vocabulary)} primitives, {len(metrics)} metrics"
    )


def _parse_sort(sort: str) -> tuple[str, str]:
    rows, cols = "metric", "family"
    for part in filter(None, sort.split(",")):
        key, _, value = part.partition("=")
        if key == "rows":
            rows = value
        elif key == "cols":
            cols = value
        else:
            _fail(EXIT_VALIDATION, f"bad sort component {part!r}")
    return rows, cols


@main.command()
@click.option("--bundle", required=True, type=click.Path(exists=True))
@click.option("--metric", default=None)
@click.option("--k", default=3, type=int, help="Max primitive-group cardinality.")
@click.option("--sort", default="rows=metric,cols=family")
@click.option("--out", required=True, type=click.Path())
def report(bundle, metric, k, sort, out):
    """Write matrix, contribution, group, and best-score report files."""
    rows, cols = _parse_sort(sort)
    out_dir = Path(out)
    try:
        c = load_bundle(bundle)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "matrix.json").write_bytes(
            serialize.dumps(serialize.matrix_payload(c, metric, rows=rows, cols=cols))
        )
        (out_dir / "matrix.csv").write_text(matrix_to_csv(build_usage_matrix(c)))
        (out_dir / "contributions.json").write_bytes(
            serialize.dumps(serialize.contributions_payload(c, metric))
        )
        (out_dir / "cpc.json").write_bytes(
            serialize.dumps(serialize.cpc_payload(c, metric, k))
        )
        (out_dir / "best_scores.json").write_bytes(
            serialize.dumps(serialize.best_scores_payload(c, metric))
        )
    except Exception as e:  # noqa: BLE001
        _fail(_exit_code(e), str(e))
    click.echo(f"report written to {out_dir}")


@main.command()
@click.option("--bundle", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.argument("pipeline_ids", nargs=-1, required=True)
def merge(bundle, out, pipeline_ids):
    """Merge the selected pipelines into one summary graph."""
    out_dir = Path(out)
    try:
        c = load_bundle(bundle)
        graphs = []
        for pid in pipeline_ids:
            p = c.get(pid)
            if p is None:
                raise UnknownPipelineId(f"unknown pipeline id {pid!r}")
            graphs.append(merged_from_dag(derive_dag(p), pid))
        merged = merge_many(graphs)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "merged.json").write_bytes(
            serialize.dumps(serialize.merged_payload(merged))
        )
        (out_dir / "merged.dot").write_text(merged_to_dot(merged))
    except Exception as e:  # noqa: BLE001
        _fail(_exit_code(e), str(e))
    click.echo(f"merged graph written to {out_dir}")


@main.command()
@click.option("--bundle", required=True, type=click.Path(exists=True))
@click.option("--keep", required=True, help="Comma-separated pipeline ids.")
@click.option("--out", required=True, type=click.Path())
def export(bundle, keep, out):
    """Export a subset of the bundle as a new, re-ingestable bundle."""
    keep_ids = [x for x in keep.split(",") if x]
    try:
        c = load_bundle(bundle)
        kept = subset(c, keep_ids)
        write_bundle(kept, Path(out))
    except Exception as e:  # noqa: BLE001
        _fail(_exit_code(e), str(e))
    click.echo(f"exported {len(keep_ids)} pipelines to {out}")


@main.command()
@click.option("--bundle", multiple=True, type=click.Path(exists=True))
@click.option("--addr", default="127.0.0.1:8000")
def serve(bundle, addr):
    """Serve the HTTP analysis API."""
    import uvicorn

    from .service import create_app

    host, _, port = addr.partition(":")
    app = create_app([load_bundle(b) for b in bundle])
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


if __name__ == "__main__":
    main()
