"""pipeprof: analysis engine for collections of AutoML-generated pipelines."""

from .analytics import (
    MetricVector,
    OneHotMatrix,
    SortSpec,
    UsageMatrix,
    build_usage_matrix,
    expand_hyperparameters,
    metric_vector,
    sort_columns,
    sort_rows,
    subset,
)
from .contribution import (
    ContributionReport,
    CpcReport,
    PrimitiveGroup,
    combined_contribution,
    point_biserial,
    primitive_contributions,
)
from .merge import (
    MergedGraph,
    base_similarity,
    build_edit_matrix,
    hungarian,
    merge_many,
    merge_pair,
    merged_from_dag,
    similarity_flooding,
)
from .model import (
    Pipeline,
    PipelineCollection,
    PipelineDag,
    adapt_foreign,
    derive_dag,
    load_collection,
    parse_pipeline,
    primitive_family,
    serialize_pipeline,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
