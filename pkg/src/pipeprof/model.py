"""Pipeline document parsing, validation, and the in-memory DAG model.

Accepts two document shapes: a subset of the D3M pipeline-description JSON
(steps with ``primitive.python_path``, argument references, hyperparameters,
embedded scores) and a simpler adapter schema for pipelines coming from
foreign AutoML systems. Both normalize into the same immutable ``Pipeline``
structure.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    CollectionLoadError,
    CycleDetected,
    DuplicatePipelineId,
    EmptyCollection,
    ForwardReference,
    MalformedDocument,
    PipeprofError,
    UnknownMetric,
    UnsupportedStepType,
)

HIGHER = "higher_better"
LOWER = "lower_better"

#: Seed directions for common metrics; unknown metrics need an explicit
#: direction in the document.
METRIC_DIRECTIONS: dict[str, str] = {
    "accuracy": HIGHER,
    "f1": HIGHER,
    "f1_macro": HIGHER,
    "mean_squared_error": LOWER,
    "root_mean_squared_error": LOWER,
    "time": LOWER,
}

TERMINAL_FAMILY = "terminal"
INPUT_NODE_ID = "input"
OUTPUT_NODE_ID = "output"
INPUT_PATH = "terminal.input"
OUTPUT_PATH = "terminal.output"

_INPUT_REF = re.compile(r"^inputs\.(\d+)$")
_STEP_REF = re.compile(r"^steps\.(\d+)\.(\w+)$")


def canonical_value(value: object) -> str:
    """Render a hyperparameter value in a stable text form.

    Lowercase booleans, shortest round-trip decimals, and lexicographic key
    order inside compound values, so one-hot column identities stay stable
    across runs.
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True, separators=(",", ":"), default=str)


def primitive_family(path: str) -> str:
    """Family segment of a primitive path; ``other`` when not recognizable.

    D3M-style paths put the family third: ``d3m.primitives.<family>.<name>...``.
    """
    parts = path.split(".")
    if len(parts) >= 4 and parts[1] == "primitives" and parts[2]:
        return parts[2]
    return "other"


@dataclass(frozen=True)
class PrimitiveRef:
    """Identity of one computational step type."""

    path: str
    name: str
    family: str


@dataclass(frozen=True)
class HyperparamSetting:
    name: str
    kind: str  # "literal" | "data-reference"
    value: str  # canonical text form


@dataclass(frozen=True)
class PipelineStep:
    index: int
    primitive: PrimitiveRef
    hyperparams: tuple[HyperparamSetting, ...]
    inputs: tuple[str, ...]


@dataclass(frozen=True)
class Score:
    metric: str
    value: float
    direction: str


@dataclass(frozen=True)
class Pipeline:
    """A validated pipeline: ordered steps plus scores and timings."""

    id: str
    source: str
    steps: tuple[PipelineStep, ...]
    scores: tuple[Score, ...]
    output_steps: tuple[int, ...]
    train_time_s: float | None = None
    predict_time_s: float | None = None

    def primitive_paths(self) -> set[str]:
        return {s.primitive.path for s in self.steps}

    def score(self, metric: str) -> Score | None:
        for s in self.scores:
            if s.metric == metric:
                return s
        return None


@dataclass(frozen=True)
class DagNode:
    id: str
    label: str
    family: str
    path: str


@dataclass(frozen=True)
class PipelineDag:
    """Step graph with synthetic Input/Output terminals."""

    nodes: tuple[DagNode, ...]
    edges: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class ProblemInfo:
    task_type: str
    dataset_name: str
    primary_metric: str


@dataclass(frozen=True)
class PipelineCollection:
    """A set of pipelines for one problem, the unit of analysis."""

    id: str
    problem: ProblemInfo
    pipelines: tuple[Pipeline, ...]
    vocabulary: tuple[PrimitiveRef, ...] = field(default=())

    def pipeline_ids(self) -> list[str]:
        return [p.id for p in self.pipelines]

    def get(self, pipeline_id: str) -> Pipeline | None:
        for p in self.pipelines:
            if p.id == pipeline_id:
                return p
        return None


def _resolve_direction(metric: str, explicit: str | None) -> str:
    if explicit is not None:
        if explicit not in (HIGHER, LOWER):
            raise MalformedDocument(f"invalid score direction {explicit!r}")
        return explicit
    try:
        return METRIC_DIRECTIONS[metric]
    except KeyError:
        raise UnknownMetric(
            f"metric {metric!r} not in registry and no direction supplied"
        ) from None


def _parse_scores(raw: object) -> tuple[Score, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise MalformedDocument("scores must be a list")
    scores = []
    for entry in raw:
        if not isinstance(entry, dict) or "metric" not in entry or "value" not in entry:
            raise MalformedDocument(f"invalid score entry: {entry!r}")
        metric = str(entry["metric"])
        try:
            value = float(entry["value"])
        except (TypeError, ValueError):
            raise MalformedDocument(f"non-numeric score value: {entry!r}") from None
        if value != value or value in (float("inf"), float("-inf")):
            raise MalformedDocument(f"non-finite score value for {metric!r}")
        direction = _resolve_direction(metric, entry.get("direction"))
        scores.append(Score(metric=metric, value=value, direction=direction))
    return tuple(scores)


def _parse_time(doc: dict, key: str) -> float | None:
    raw = doc.get(key)
    if raw is None:
        return None
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise MalformedDocument(f"{key} must be a number") from None
    if value < 0:
        raise MalformedDocument(f"{key} must be nonnegative")
    return value


def _iter_refs(value: object):
    """Yield reference strings from an argument value (scalar or list)."""
    if isinstance(value, dict):
        yield from _iter_refs(value.get("data"))
    elif isinstance(value, list):
        for item in value:
            yield from _iter_refs(item)
    elif isinstance(value, str):
        yield value
    else:
        raise MalformedDocument(f"invalid argument reference: {value!r}")


def _parse_step(idx: int, raw: object) -> PipelineStep:
    if not isinstance(raw, dict):
        raise MalformedDocument(f"step {idx} is not an object")
    step_type = raw.get("type", "PRIMITIVE")
    if step_type != "PRIMITIVE":
        raise UnsupportedStepType(f"step {idx} has unsupported type {step_type!r}")
    prim = raw.get("primitive")
    if not isinstance(prim, dict) or not prim.get("python_path"):
        raise MalformedDocument(f"step {idx} lacks primitive.python_path")
    path = str(prim["python_path"])
    name = str(prim.get("name") or path.rsplit(".", 1)[-1])
    primitive = PrimitiveRef(path=path, name=name, family=primitive_family(path))

    inputs: list[str] = []
    arguments = raw.get("arguments", {})
    if not isinstance(arguments, dict):
        raise MalformedDocument(f"step {idx} arguments must be an object")
    for arg_value in arguments.values():
        for ref in _iter_refs(arg_value):
            if _INPUT_REF.match(ref):
                inputs.append(ref)
                continue
            m = _STEP_REF.match(ref)
            if not m:
                raise MalformedDocument(f"step {idx}: bad reference {ref!r}")
            if int(m.group(1)) >= idx:
                raise ForwardReference(
                    f"step {idx} references {ref!r} (must reference an earlier step)"
                )
            inputs.append(ref)

    hyperparams: list[HyperparamSetting] = []
    raw_hp = raw.get("hyperparams", {})
    if not isinstance(raw_hp, dict):
        raise MalformedDocument(f"step {idx} hyperparams must be an object")
    seen = set()
    for hp_name in sorted(raw_hp):
        if hp_name in seen:
            raise MalformedDocument(f"step {idx}: duplicate hyperparam {hp_name!r}")
        seen.add(hp_name)
        spec = raw_hp[hp_name]
        if isinstance(spec, dict) and "data" in spec:
            kind = "literal" if spec.get("type", "VALUE") == "VALUE" else "data-reference"
            data = spec["data"]
        else:
            kind, data = "literal", spec
        hyperparams.append(
            HyperparamSetting(name=hp_name, kind=kind, value=canonical_value(data))
        )

    return PipelineStep(
        index=idx,
        primitive=primitive,
        hyperparams=tuple(hyperparams),
        inputs=tuple(inputs),
    )


def _check_reachable(steps: list[PipelineStep]) -> None:
    consumers: dict[int, list[int]] = {i: [] for i in range(len(steps))}
    roots = []
    for step in steps:
        for ref in step.inputs:
            if _INPUT_REF.match(ref):
                roots.append(step.index)
            else:
                producer = int(_STEP_REF.match(ref).group(1))
                consumers[producer].append(step.index)
    reached = set(roots)
    queue = deque(roots)
    while queue:
        i = queue.popleft()
        for j in consumers[i]:
            if j not in reached:
                reached.add(j)
                queue.append(j)
    unreachable = sorted(set(range(len(steps))) - reached)
    if unreachable:
        raise MalformedDocument(
            f"steps not reachable from any pipeline input: {unreachable}"
        )


def _digest(doc: dict) -> str:
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha1(blob.encode()).hexdigest()[:16]


def _as_dict(document: object, what: str = "document") -> dict:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise MalformedDocument(f"{what} is not valid JSON: {e}") from None
    if not isinstance(document, dict):
        raise MalformedDocument(f"{what} must be a JSON object")
    return document


def parse_pipeline(document: str | bytes | dict) -> Pipeline:
    """Parse an accepted-schema pipeline document into a validated Pipeline."""
    doc = _as_dict(document)
    raw_steps = doc.get("steps")
    if not isinstance(raw_steps, list) or not raw_steps:
        raise MalformedDocument("document needs a non-empty steps list")
    steps = [_parse_step(i, raw) for i, raw in enumerate(raw_steps)]
    _check_reachable(steps)

    source = doc.get("source", {})
    if isinstance(source, dict):
        source_name = str(source.get("name", "unknown"))
    else:
        source_name = str(source)

    raw_outputs = doc.get("outputs")
    if raw_outputs is None:
        output_steps = (len(steps) - 1,)
    else:
        if not isinstance(raw_outputs, list) or not raw_outputs:
            raise MalformedDocument("outputs must be a non-empty list")
        indices = []
        for out in raw_outputs:
            ref = out.get("data") if isinstance(out, dict) else out
            m = _STEP_REF.match(ref) if isinstance(ref, str) else None
            if not m:
                raise MalformedDocument(f"bad output reference: {ref!r}")
            i = int(m.group(1))
            if i >= len(steps):
                raise MalformedDocument(f"output references missing step {i}")
            indices.append(i)
        output_steps = tuple(indices)

    return Pipeline(
        id=str(doc.get("id") or _digest(doc)),
        source=source_name,
        steps=tuple(steps),
        scores=_parse_scores(doc.get("scores")),
        output_steps=output_steps,
        train_time_s=_parse_time(doc, "train_time_s"),
        predict_time_s=_parse_time(doc, "predict_time_s"),
    )


def _sanitize(text: str) -> str:
    return re.sub(r"[^a-z0-9_]+", "_", text.lower()).strip("_") or "x"


def adapt_foreign(descriptor: str | bytes | dict) -> Pipeline:
    """Synthesize a linear Pipeline from the generic adapter schema.

    Adapter steps carry only (name, family, hyperparams); a D3M-style path is
    synthesized so the family stays derivable from it.
    """
    desc = _as_dict(descriptor, "descriptor")
    raw_steps = desc.get("steps")
    if not isinstance(raw_steps, list) or not raw_steps:
        raise MalformedDocument("adapter descriptor needs a non-empty steps list")
    source = str(desc.get("source", "foreign"))
    slug = _sanitize(source)
    steps_doc = []
    for k, raw in enumerate(raw_steps):
        if not isinstance(raw, dict) or not raw.get("name"):
            raise MalformedDocument(f"adapter step {k} lacks a name")
        name = str(raw["name"])
        family = str(raw.get("family") or "other")
        steps_doc.append(
            {
                "type": "PRIMITIVE",
                "primitive": {
                    "python_path": f"{slug}.primitives.{family}.{_sanitize(name)}",
                    "name": name,
                },
                "arguments": {
                    "inputs": {
                        "data": "inputs.0" if k == 0 else f"steps.{k - 1}.produce"
                    }
                },
                "hyperparams": {
                    str(n): {"type": "VALUE", "data": v}
                    for n, v in (raw.get("hyperparams") or {}).items()
                },
            }
        )
    doc = {
        "id": desc.get("pipeline_id") or _digest(desc),
        "source": {"name": source},
        "inputs": [{"name": "inputs"}],
        "outputs": [{"data": f"steps.{len(steps_doc) - 1}.produce"}],
        "steps": steps_doc,
        "scores": desc.get("scores", []),
    }
    for key in ("train_time_s", "predict_time_s"):
        if desc.get(key) is not None:
            doc[key] = desc[key]
    return parse_pipeline(doc)


def parse_document(document: str | bytes | dict) -> Pipeline:
    """Dispatch between the D3M-style schema and the adapter schema."""
    doc = _as_dict(document)
    steps = doc.get("steps")
    if isinstance(steps, list) and steps and isinstance(steps[0], dict):
        if "primitive" in steps[0]:
            return parse_pipeline(doc)
        if "name" in steps[0]:
            return adapt_foreign(doc)
    return parse_pipeline(doc)


def derive_dag(p: Pipeline) -> PipelineDag:
    """Step graph of a pipeline with Input/Output terminal nodes."""
    nodes = [DagNode(INPUT_NODE_ID, "Input", TERMINAL_FAMILY, INPUT_PATH)]
    for step in p.steps:
        nodes.append(
            DagNode(
                id=f"step.{step.index}",
                label=step.primitive.name,
                family=step.primitive.family,
                path=step.primitive.path,
            )
        )
    nodes.append(DagNode(OUTPUT_NODE_ID, "Output", TERMINAL_FAMILY, OUTPUT_PATH))

    edges: set[tuple[str, str]] = set()
    for step in p.steps:
        for ref in step.inputs:
            if _INPUT_REF.match(ref):
                edges.add((INPUT_NODE_ID, f"step.{step.index}"))
            else:
                producer = int(_STEP_REF.match(ref).group(1))
                edges.add((f"step.{producer}", f"step.{step.index}"))
    for i in sorted(set(p.output_steps)):
        edges.add((f"step.{i}", OUTPUT_NODE_ID))

    edge_list = tuple(sorted(edges))
    _check_acyclic([n.id for n in nodes], edge_list)
    return PipelineDag(nodes=tuple(nodes), edges=edge_list)


def _check_acyclic(node_ids: list[str], edges: tuple[tuple[str, str], ...]) -> None:
    indeg = {n: 0 for n in node_ids}
    out: dict[str, list[str]] = {n: [] for n in node_ids}
    for a, b in edges:
        out[a].append(b)
        indeg[b] += 1
    queue = deque(n for n in node_ids if indeg[n] == 0)
    seen = 0
    while queue:
        n = queue.popleft()
        seen += 1
        for m in out[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                queue.append(m)
    if seen != len(node_ids):
        raise CycleDetected("derived step graph contains a cycle")


def serialize_pipeline(p: Pipeline) -> dict:
    """Write a Pipeline back out in the accepted document schema."""
    return {
        "id": p.id,
        "source": {"name": p.source},
        "inputs": [{"name": "inputs"}],
        "outputs": [{"data": f"steps.{i}.produce"} for i in p.output_steps],
        "steps": [
            {
                "type": "PRIMITIVE",
                "primitive": {
                    "python_path": s.primitive.path,
                    "name": s.primitive.name,
                },
                "arguments": {"inputs": {"type": "CONTAINER", "data": list(s.inputs)}},
                "hyperparams": {
                    h.name: {
                        "type": "VALUE" if h.kind == "literal" else "DATA",
                        "data": h.value,
                    }
                    for h in s.hyperparams
                },
            }
            for s in p.steps
        ],
        "scores": [
            {"metric": s.metric, "value": s.value, "direction": s.direction}
            for s in p.scores
        ],
        "train_time_s": p.train_time_s,
        "predict_time_s": p.predict_time_s,
    }


def load_collection(
    documents: list,
    problem: ProblemInfo | dict,
    collection_id: str | None = None,
) -> PipelineCollection:
    """Parse documents into a collection with a deduplicated vocabulary."""
    if not documents:
        raise EmptyCollection("need at least one document")
    if isinstance(problem, dict):
        problem = ProblemInfo(
            task_type=str(problem.get("task_type", "unknown")),
            dataset_name=str(problem.get("dataset_name", "unknown")),
            primary_metric=str(problem.get("primary_metric", "accuracy")),
        )

    pipelines: list[Pipeline] = []
    failures: list[tuple[int, PipeprofError]] = []
    for i, doc in enumerate(documents):
        try:
            pipelines.append(parse_document(doc))
        except PipeprofError as e:
            failures.append((i, e))
    if failures:
        raise CollectionLoadError(failures)

    seen_ids: set[str] = set()
    for p in pipelines:
        if p.id in seen_ids:
            raise DuplicatePipelineId(f"duplicate pipeline id {p.id!r}")
        seen_ids.add(p.id)

    return PipelineCollection(
        id=collection_id or _digest({"ids": sorted(seen_ids)}),
        problem=problem,
        pipelines=tuple(pipelines),
        vocabulary=build_vocabulary(pipelines),
    )


def build_vocabulary(pipelines: list[Pipeline]) -> tuple[PrimitiveRef, ...]:
    by_path: dict[str, PrimitiveRef] = {}
    for p in pipelines:
        for step in p.steps:
            by_path.setdefault(step.primitive.path, step.primitive)
    return tuple(by_path[path] for path in sorted(by_path))
