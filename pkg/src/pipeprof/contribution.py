"""Primitive contribution scoring.

Single primitives are scored with the point-biserial correlation between
their usage indicator column and a metric vector. Groups of primitives are
mined by enumerating every subset up to a cardinality bound, scoring the
joint (elementwise AND) indicator, and reporting only groups that strictly
dominate every proper non-empty subset in absolute correlation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import sqrt

import numpy as np

from .analytics import build_usage_matrix, metric_vector
from .errors import KOutOfRange, LengthMismatch
from .model import PipelineCollection


@dataclass(frozen=True)
class ContributionEntry:
    value: float | None  # None when the correlation is undefined
    n1: int
    n0: int


@dataclass(frozen=True)
class ContributionReport:
    metric: str
    entries: dict[str, ContributionEntry]


@dataclass(frozen=True)
class PrimitiveGroup:
    members: tuple[str, ...]  # sorted primitive paths
    correlation: float
    n_joint_usage: int


@dataclass(frozen=True)
class CpcReport:
    metric: str
    k: int
    groups: tuple[PrimitiveGroup, ...]
    subsets_evaluated: int


def point_biserial(p, m) -> float | None:
    """Point-biserial correlation of a boolean vector with a real vector.

    Uses the population standard deviation so the result equals the Pearson
    correlation exactly. Returns None when either group is empty or the
    metric is constant.
    """
    p = np.asarray(p, dtype=bool)
    m = np.asarray(m, dtype=float)
    if p.shape != m.shape or p.ndim != 1:
        raise LengthMismatch(f"shape mismatch: {p.shape} vs {m.shape}")
    if p.size < 2:
        raise LengthMismatch("need at least 2 observations")
    n = p.size
    n1 = int(p.sum())
    n0 = n - n1
    if n1 == 0 or n0 == 0:
        return None
    s = float(m.std())  # population (divisor n)
    if s == 0.0:
        return None
    m1 = float(m[p].mean())
    m0 = float(m[~p].mean())
    return ((m1 - m0) / s) * sqrt(n1 * n0 / (n * n))


def primitive_contributions(
    c: PipelineCollection, metric: str, time_source: str = "predict"
) -> ContributionReport:
    """Per-primitive point-biserial correlation with the chosen metric."""
    usage = build_usage_matrix(c)
    mv = metric_vector(c, metric, time_source=time_source)
    entries = {}
    for j, path in enumerate(usage.primitive_paths):
        col = usage.cells[:, j]
        n1 = int(col.sum())
        entries[path] = ContributionEntry(
            value=point_biserial(col, mv.values),
            n1=n1,
            n0=len(usage.pipeline_ids) - n1,
        )
    return ContributionReport(metric=metric, entries=entries)


def combined_contribution(
    c: PipelineCollection, metric: str, k: int = 3, time_source: str = "predict"
) -> CpcReport:
    """Mine primitive groups whose joint usage correlates with the metric.

    Every subset of the vocabulary with 1 <= |S| <= k is scored; a group of
    size >= 2 is reported iff its correlation is defined and its absolute
    value strictly exceeds that of every proper non-empty subset (undefined
    subset correlations compare as 0). Output is sorted by descending
    absolute correlation, ties broken by member paths.
    """
    usage = build_usage_matrix(c)
    n_prims = len(usage.primitive_paths)
    if k < 2 or k > n_prims:
        raise KOutOfRange(f"k={k} outside [2, {n_prims}]")
    mv = metric_vector(c, metric, time_source=time_source)

    m = mv.values
    n = len(m)
    m_sum = float(m.sum())
    s = float(m.std())
    cols = usage.cells.astype(np.uint8)

    def corr(indicator: np.ndarray) -> float | None:
        n1 = int(indicator.sum())
        n0 = n - n1
        if n1 == 0 or n0 == 0 or s == 0.0:
            return None
        m1 = float(indicator @ m) / n1
        m0 = (m_sum - m1 * n1) / n0
        return ((m1 - m0) / s) * sqrt(n1 * n0 / (n * n))

    # First pass: correlation of every subset up to size k, in lexicographic
    # order over the (sorted) vocabulary.
    contributions: dict[frozenset[int], float | None] = {}
    joint_n1: dict[frozenset[int], int] = {}
    indicators: dict[frozenset[int], np.ndarray] = {}
    evaluated = 0
    for size in range(1, k + 1):
        for combo in combinations(range(n_prims), size):
            if size == 1:
                vec = cols[:, combo[0]]
            else:
                vec = indicators[frozenset(combo[:-1])] & cols[:, combo[-1]]
            key = frozenset(combo)
            if size < k:
                indicators[key] = vec
            contributions[key] = corr(vec)
            joint_n1[key] = int(vec.sum())
            evaluated += 1

    # Second pass: keep groups strictly dominating all proper subsets.
    groups = []
    for size in range(2, k + 1):
        for combo in combinations(range(n_prims), size):
            key = frozenset(combo)
            value = contributions[key]
            if value is None:
                continue
            dominated = False
            for sub_size in range(1, size):
                for sub in combinations(combo, sub_size):
                    b = contributions[frozenset(sub)]
                    if abs(b if b is not None else 0.0) >= abs(value):
                        dominated = True
                        break
                if dominated:
                    break
            if not dominated:
                groups.append(
                    PrimitiveGroup(
                        members=tuple(usage.primitive_paths[j] for j in combo),
                        correlation=value,
                        n_joint_usage=joint_n1[key],
                    )
                )

    groups.sort(key=lambda g: (-abs(g.correlation), g.members))
    return CpcReport(
        metric=metric, k=k, groups=tuple(groups), subsets_evaluated=evaluated
    )
