"""Visual-diff summary graphs for structurally different pipelines.

Two DAGs are merged by (1) seeding node-pair similarities from primitive
identity, (2) adjusting them with similarity flooding, (3) building a graph
edit matrix whose perfect assignments encode substitutions, deletions, and
insertions, (4) solving it with the Hungarian algorithm, and (5) collapsing
matched pairs into compound nodes unless doing so would create a cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import CycleDetected, NoFiniteAssignment
from .model import PipelineDag

#: Cost of deleting or inserting one node.
EDIT_COST = 0.4

#: Stand-in for the infinite entries of the edit matrix; any real edit cost
#: is orders of magnitude below this.
_BIG = 1e9

DEFAULT_EPS = 1e-4
DEFAULT_MAX_ITER = 100


@dataclass(frozen=True)
class Member:
    """One source-pipeline node folded into a compound node."""

    path: str
    label: str


@dataclass(frozen=True)
class MergedNode:
    id: str
    family: str
    kind: str  # "primitive" | "input" | "output"
    members: dict[str, Member]  # pipeline id -> member

    @property
    def paths(self) -> frozenset[str]:
        return frozenset(m.path for m in self.members.values())

    @property
    def provenance(self) -> tuple[str, ...]:
        return tuple(sorted(self.members))


@dataclass(frozen=True)
class MergedEdge:
    src: str
    dst: str
    provenance: tuple[str, ...]


@dataclass(frozen=True)
class MergedGraph:
    pipeline_ids: tuple[str, ...]
    nodes: tuple[MergedNode, ...]
    edges: tuple[MergedEdge, ...]


@dataclass(frozen=True)
class Matching:
    """A perfect assignment over the edit matrix."""

    pairs: tuple[tuple[int, int], ...]
    total_cost: float
    substitutions: tuple[tuple[int, int], ...] = ()
    deletions: tuple[int, ...] = ()
    insertions: tuple[int, ...] = ()


def merged_from_dag(dag: PipelineDag, pipeline_id: str) -> MergedGraph:
    """Lift a single pipeline DAG into a one-pipeline merged graph."""
    nodes = []
    for n in dag.nodes:
        if n.family == "terminal":
            kind = "input" if n.id == "input" else "output"
        else:
            kind = "primitive"
        nodes.append(
            MergedNode(
                id=n.id,
                family=n.family,
                kind=kind,
                members={pipeline_id: Member(path=n.path, label=n.label)},
            )
        )
    edges = tuple(
        MergedEdge(src=a, dst=b, provenance=(pipeline_id,)) for a, b in dag.edges
    )
    return MergedGraph(pipeline_ids=(pipeline_id,), nodes=tuple(nodes), edges=edges)


def base_similarity(p: MergedNode, q: MergedNode) -> float:
    """Seed similarity: 1.0 total match, 0.5 same family, 0.0 otherwise."""
    if p.kind != "primitive" or q.kind != "primitive":
        return 1.0 if p.kind == q.kind else 0.0
    if p.paths & q.paths:
        return 1.0
    if p.family == q.family:
        return 0.5
    return 0.0


def _adjacency(g: MergedGraph) -> np.ndarray:
    index = {n.id: i for i, n in enumerate(g.nodes)}
    a = np.zeros((len(g.nodes), len(g.nodes)))
    for e in g.edges:
        a[index[e.src], index[e.dst]] = 1.0
    return a


def similarity_flooding(
    g1: MergedGraph,
    g2: MergedGraph,
    seed: np.ndarray,
    eps: float = DEFAULT_EPS,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """Fixpoint propagation of pair similarities along corresponding edges.

    A pair (p, q) receives weight from (p', q') when edges p'->p and q'->q
    exist, and symmetrically along out-edges; each pair splits its weight
    equally among its neighbor pairs. After every update the table is
    normalized by its maximum. Stops when the largest change drops below
    ``eps`` or after ``max_iter`` sweeps.
    """
    a1, a2 = _adjacency(g1), _adjacency(g2)
    with np.errstate(divide="ignore", invalid="ignore"):
        w1 = np.where(a1.sum(1, keepdims=True) > 0, a1 / a1.sum(1, keepdims=True), 0.0)
        w2 = np.where(a2.sum(1, keepdims=True) > 0, a2 / a2.sum(1, keepdims=True), 0.0)
        v1 = np.where(a1.sum(0, keepdims=True) > 0, a1 / a1.sum(0, keepdims=True), 0.0)
        v2 = np.where(a2.sum(0, keepdims=True) > 0, a2 / a2.sum(0, keepdims=True), 0.0)

    sigma = seed.astype(float).copy()
    peak = sigma.max()
    if peak > 0:
        sigma /= peak
    for _ in range(max_iter):
        propagated = w1.T @ sigma @ w2 + v1 @ sigma @ v2.T
        new = seed + sigma + propagated
        peak = new.max()
        if peak > 0:
            new /= peak
        delta = np.abs(new - sigma).max()
        sigma = new
        if delta < eps:
            break
    return sigma


def rescale_similarities(seed: np.ndarray, flooded: np.ndarray) -> np.ndarray:
    """Map flooded values back into [0, 1] with the seed anchors pinned.

    Total matches (seed 1.0) stay at 1.0 and implausible pairs (seed 0.0)
    stay at 0.0, so flooding reorders plausible matches without ever making
    an implausible substitution cheap.
    """
    out = flooded.copy()
    peak = out.max()
    if peak > 0:
        out /= peak
    out[seed >= 1.0] = 1.0
    out[seed <= 0.0] = 0.0
    return np.clip(out, 0.0, 1.0)


def build_edit_matrix(m: int, n: int, sims: np.ndarray) -> np.ndarray:
    """(m+n) x (n+m) block cost matrix over similarities ``sims`` (m x n)."""
    e = np.full((m + n, n + m), np.inf)
    e[:m, :n] = 1.0 - sims
    for i in range(m):
        e[i, n + i] = EDIT_COST
    for j in range(n):
        e[m + j, j] = EDIT_COST
    e[m:, n:] = 0.0
    return e


def _assignment_cost(c: np.ndarray) -> float:
    if c.size == 0:
        return 0.0
    rows, cols = linear_sum_assignment(c)
    return float(c[rows, cols].sum())


def hungarian(cost: np.ndarray, m: int | None = None, n: int | None = None) -> Matching:
    """Minimum-cost perfect assignment, lexicographically smallest among optima.

    Infinite entries are modeled with a large sentinel and must never be
    selected. When the block dimensions ``m``/``n`` are given, assignments
    are classified into substitutions, deletions, and insertions.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValueError("cost matrix must be square")
    size = cost.shape[0]
    c = np.where(np.isinf(cost), _BIG, cost)
    best = _assignment_cost(c)
    if best >= _BIG:
        raise NoFiniteAssignment("no finite-cost perfect assignment")

    # Fix rows top-down, taking the smallest column that still completes to
    # an optimal assignment; this pins the lexicographically smallest optimum.
    remaining = list(range(size))
    prefix = 0.0
    chosen: list[int] = []
    for row in range(size):
        picked = None
        for col in remaining:
            rest = c[np.ix_(range(row + 1, size), [x for x in remaining if x != col])]
            total = prefix + c[row, col] + _assignment_cost(rest)
            if total <= best + 1e-9:
                picked = col
                break
        if picked is None:  # cannot happen for a solvable matrix
            raise NoFiniteAssignment("assignment refinement failed")
        chosen.append(picked)
        prefix += c[row, picked]
        remaining.remove(picked)

    pairs = tuple((r, chosen[r]) for r in range(size))
    if any(np.isinf(cost[r, col]) for r, col in pairs):
        raise NoFiniteAssignment("optimal assignment uses an infinite entry")
    total_cost = float(sum(cost[r, col] for r, col in pairs))

    subs: tuple[tuple[int, int], ...] = ()
    dels: tuple[int, ...] = ()
    ins: tuple[int, ...] = ()
    if m is not None and n is not None:
        subs = tuple((r, col) for r, col in pairs if r < m and col < n)
        dels = tuple(r for r, col in pairs if r < m and col >= n)
        ins = tuple(col for r, col in pairs if r >= m and col < n)
    return Matching(
        pairs=pairs,
        total_cost=total_cost,
        substitutions=subs,
        deletions=dels,
        insertions=ins,
    )


def _reaches(adj: dict[int, set[int]], start: int, goal: int) -> bool:
    stack = [start]
    seen = set()
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y == goal:
                return True
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def _member_sort_key(node: MergedNode):
    return tuple(sorted((pid, m.path) for pid, m in node.members.items()))


def merge_pair(g1: MergedGraph, g2: MergedGraph) -> MergedGraph:
    """Merge two acyclic graphs into one summary graph with provenance."""
    nodes1, nodes2 = g1.nodes, g2.nodes
    m, n = len(nodes1), len(nodes2)
    seed = np.array(
        [[base_similarity(a, b) for b in nodes2] for a in nodes1], dtype=float
    )
    flooded = similarity_flooding(g1, g2, seed)
    sims = rescale_similarities(seed, flooded)
    matching = hungarian(build_edit_matrix(m, n, sims), m, n)

    # Group slots: 0..m-1 for g1 nodes, m..m+n-1 for g2 nodes.
    parent = list(range(m + n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    index1 = {node.id: i for i, node in enumerate(nodes1)}
    index2 = {node.id: m + i for i, node in enumerate(nodes2)}
    raw_edges = [(index1[e.src], index1[e.dst], e.provenance) for e in g1.edges]
    raw_edges += [(index2[e.src], index2[e.dst], e.provenance) for e in g2.edges]

    def group_adjacency() -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {}
        for a, b, _ in raw_edges:
            ga, gb = find(a), find(b)
            adj.setdefault(ga, set()).add(gb)
        return adj

    # Commit substitutions strongest-first; demote to delete+insert when the
    # contraction would close a cycle.
    order = sorted(
        matching.substitutions,
        key=lambda ij: (
            -sims[ij[0], ij[1]],
            _member_sort_key(nodes1[ij[0]]),
            _member_sort_key(nodes2[ij[1]]),
        ),
    )
    for i, j in order:
        gi, gj = find(i), find(m + j)
        adj = group_adjacency()
        if _reaches(adj, gi, gj) or _reaches(adj, gj, gi):
            continue
        parent[gj] = gi

    # Assemble compound nodes per group.
    slot_node = list(nodes1) + list(nodes2)
    groups: dict[int, list[int]] = {}
    for slot in range(m + n):
        groups.setdefault(find(slot), []).append(slot)

    compound: dict[int, MergedNode] = {}
    for root, slots in groups.items():
        members: dict[str, Member] = {}
        for slot in slots:
            for pid, member in slot_node[slot].members.items():
                members.setdefault(pid, member)
        sample = slot_node[slots[0]]
        compound[root] = MergedNode(
            id="", family=sample.family, kind=sample.kind, members=members
        )

    # Deterministic node ids: topological order, ties by member identity.
    adj = group_adjacency()
    indeg = {root: 0 for root in groups}
    for a, targets in adj.items():
        for b in targets:
            if b != a:
                indeg[b] += 1
    ready = [r for r in groups if indeg[r] == 0]
    topo: list[int] = []
    while ready:
        r = min(ready, key=lambda x: _member_sort_key(compound[x]))
        ready.remove(r)
        topo.append(r)
        for b in adj.get(r, ()):
            if b != r:
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
    if len(topo) != len(groups):
        raise CycleDetected("merged graph contains a cycle")

    group_id = {root: f"n{pos}" for pos, root in enumerate(topo)}
    out_nodes = tuple(
        MergedNode(
            id=group_id[root],
            family=compound[root].family,
            kind=compound[root].kind,
            members=compound[root].members,
        )
        for root in topo
    )

    edge_prov: dict[tuple[str, str], set[str]] = {}
    for a, b, provenance in raw_edges:
        key = (group_id[find(a)], group_id[find(b)])
        edge_prov.setdefault(key, set()).update(provenance)
    out_edges = tuple(
        MergedEdge(src=src, dst=dst, provenance=tuple(sorted(prov)))
        for (src, dst), prov in sorted(edge_prov.items())
    )

    pipeline_ids = list(g1.pipeline_ids)
    for pid in g2.pipeline_ids:
        if pid not in pipeline_ids:
            pipeline_ids.append(pid)
    return MergedGraph(
        pipeline_ids=tuple(pipeline_ids), nodes=out_nodes, edges=out_edges
    )


def merge_many(graphs: list[MergedGraph]) -> MergedGraph:
    """Left fold of merge_pair in the given (user-selection) order."""
    if not graphs:
        raise ValueError("merge_many needs at least one graph")
    result = graphs[0]
    for g in graphs[1:]:
        result = merge_pair(result, g)
    return result


def merged_to_node_link(g: MergedGraph) -> dict:
    return {
        "schema_version": "1",
        "pipeline_ids": list(g.pipeline_ids),
        "nodes": [
            {
                "id": node.id,
                "labels": {pid: member.label for pid, member in sorted(node.members.items())},
                "family": node.family,
                "provenance": list(node.provenance),
            }
            for node in g.nodes
        ],
        "edges": [
            {"from": e.src, "to": e.dst, "provenance": list(e.provenance)}
            for e in g.edges
        ],
    }


def merged_to_dot(g: MergedGraph) -> str:
    lines = ["digraph merged {", "  rankdir=LR;"]
    for node in g.nodes:
        labels = sorted({m.label for m in node.members.values()})
        text = " | ".join(labels)
        lines.append(f'  "{node.id}" [label="{text}"];')
    for e in g.edges:
        lines.append(f'  "{e.src}" -> "{e.dst}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
