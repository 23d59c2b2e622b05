"""Exception types shared across the engine."""

from __future__ import annotations


class PipeprofError(Exception):
    """Base class for every error raised by the engine."""


class MalformedDocument(PipeprofError):
    """Document is syntactically broken or violates the accepted schema subset."""


class UnsupportedStepType(PipeprofError):
    """Step type outside the supported subset (sub-pipelines, placeholders)."""


class ForwardReference(PipeprofError):
    """A step references the output of a step that comes after it."""


class UnknownMetric(PipeprofError):
    """Metric not in the registry and no explicit direction supplied."""


class CycleDetected(PipeprofError):
    """Derived step graph contains a cycle (defensive check)."""


class DuplicatePipelineId(PipeprofError):
    """Two pipelines in one collection share an id."""


class EmptyCollection(PipeprofError):
    """A collection needs at least one pipeline."""


class CollectionLoadError(PipeprofError):
    """One or more documents failed to parse; carries (index, error) pairs."""

    def __init__(self, failures: list[tuple[int, PipeprofError]]):
        self.failures = failures
        detail = "; ".join(f"document {i}: {e}" for i, e in failures)
        super().__init__(f"{len(failures)} document(s) failed to parse: {detail}")


class UnknownPrimitive(PipeprofError):
    """Primitive path absent from the collection vocabulary."""


class UnknownPipelineId(PipeprofError):
    """Pipeline id absent from the collection."""


class MissingMetric(PipeprofError):
    """A pipeline does not report the requested metric."""

    def __init__(self, metric: str, pipeline_ids: list[str]):
        self.metric = metric
        self.pipeline_ids = pipeline_ids
        super().__init__(
            f"metric {metric!r} missing for pipelines: {', '.join(pipeline_ids)}"
        )


class MissingContributions(PipeprofError):
    """Column sort by contribution requested without a contribution report."""


class EmptySubset(PipeprofError):
    """Subsetting must keep at least one pipeline."""


class LengthMismatch(PipeprofError):
    """Paired vectors have different lengths."""


class KOutOfRange(PipeprofError):
    """Group cardinality bound outside [2, vocabulary size]."""


class NoFiniteAssignment(PipeprofError):
    """Assignment problem has no finite-cost solution (defensive)."""
