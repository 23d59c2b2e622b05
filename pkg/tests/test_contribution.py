import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pipeprof.contribution import (
    combined_contribution,
    point_biserial,
    primitive_contributions,
)
from pipeprof.errors import KOutOfRange, LengthMismatch
from pipeprof.model import load_collection

from conftest import make_linear_doc
from oracles import cpc_bruteforce, pearson

PROBLEM = {"task_type": "classification", "dataset_name": "x", "primary_metric": "accuracy"}


def collection_from_matrix(cells: np.ndarray, scores: np.ndarray, metric="accuracy"):
    """Collection whose usage matrix equals `cells` (classification paths)."""
    docs = []
    for i, row in enumerate(cells):
        keys = [j for j, v in enumerate(row) if v]
        steps = [
            {
                "type": "PRIMITIVE",
                "primitive": {
                    "python_path": "d3m.primitives.data_loading.loader.Common",
                    "name": "loader",
                },
                "arguments": {"inputs": {"data": "inputs.0"}},
            }
        ] + [
            {
                "type": "PRIMITIVE",
                "primitive": {
                    "python_path": f"d3m.primitives.family{j % 3}.prim{j:02d}.Common",
                    "name": f"prim{j:02d}",
                },
                "arguments": {"inputs": {"data": f"steps.{pos}.produce"}},
            }
            for pos, j in enumerate(keys)
        ]
        docs.append(
            {
                "id": f"p{i:02d}",
                "source": {"name": "synthetic"},
                "steps": steps,
                "outputs": [{"data": f"steps.{len(steps) - 1}.produce"}],
                "scores": [{"metric": metric, "value": float(scores[i])}],
            }
        )
    return load_collection(docs, PROBLEM)


def random_usage(rng, n_pipelines, n_primitives):
    """Random usage matrix with at least one primitive per pipeline."""
    cells = rng.random((n_pipelines, n_primitives)) < rng.uniform(0.2, 0.8)
    for i in range(n_pipelines):
        if not cells[i].any():
            cells[i, int(rng.integers(n_primitives))] = True
    used = cells.any(axis=0)
    return cells[:, used] if used.any() else None


class TestPointBiserial:
    def test_all_true_undefined(self):
        assert point_biserial([1, 1, 1], [0.1, 0.2, 0.3]) is None

    def test_all_false_undefined(self):
        assert point_biserial([0, 0, 0], [0.1, 0.2, 0.3]) is None

    def test_constant_metric_undefined(self):
        assert point_biserial([1, 0, 1], [0.5, 0.5, 0.5]) is None

    def test_hand_value(self):
        value = point_biserial([1, 1, 0, 0], [0.9, 0.8, 0.2, 0.1])
        assert value == pytest.approx(0.9899, abs=1e-4)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            point_biserial([1, 0], [0.1, 0.2, 0.3])

    def test_equals_pearson(self):
        rng = np.random.default_rng(13)
        for _ in range(300):
            n = int(rng.integers(2, 60))
            p = rng.random(n) < rng.uniform(0.1, 0.9)
            m = rng.standard_normal(n)
            ours = point_biserial(p, m)
            ref = pearson(p, m)
            if ref is None:
                assert ours is None
            else:
                assert ours == pytest.approx(ref, abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(
        p=st.lists(st.booleans(), min_size=3, max_size=40),
        a=st.floats(min_value=0.1, max_value=50),
        b=st.floats(min_value=-100, max_value=100),
        seed=st.integers(0, 2**31),
    )
    def test_scale_shift_invariance(self, p, a, b, seed):
        rng = np.random.default_rng(seed)
        m = rng.standard_normal(len(p))
        base = point_biserial(p, m)
        scaled = point_biserial(p, a * np.asarray(m) + b)
        negated = point_biserial(p, -np.asarray(m))
        if base is None:
            assert scaled is None and negated is None
        else:
            assert scaled == pytest.approx(base, abs=1e-8)
            assert negated == pytest.approx(-base, abs=1e-8)


class TestPrimitiveContributions:
    def test_ubiquitous_primitive_undefined(self, fixture_collection):
        report = primitive_contributions(fixture_collection, "accuracy")
        entry = report.entries["d3m.primitives.data_transformation.denormalize.Common"]
        assert entry.value is None
        assert entry.n0 == 0

    def test_perfect_dichotomy(self):
        cells = np.array([[True, True], [True, False]])
        c = collection_from_matrix(cells, np.array([0.9, 0.1]))
        report = primitive_contributions(c, "accuracy")
        assert report.entries["d3m.primitives.family1.prim01.Common"].value == pytest.approx(1.0)

    def test_counts_partition(self, fixture_collection):
        report = primitive_contributions(fixture_collection, "accuracy")
        for entry in report.entries.values():
            assert entry.n1 + entry.n0 == len(fixture_collection.pipelines)

    def test_matches_oracle_sweep(self, fixture_collection):
        report = primitive_contributions(fixture_collection, "accuracy")
        m = np.array([p.score("accuracy").value for p in fixture_collection.pipelines])
        for path, entry in report.entries.items():
            col = np.array(
                [path in p.primitive_paths() for p in fixture_collection.pipelines]
            )
            ref = pearson(col, m)
            if ref is None:
                assert entry.value is None
            else:
                assert entry.value == pytest.approx(ref, abs=1e-9)


class TestCombinedContribution:
    def test_all_constant_empty_report(self):
        cells = np.ones((4, 3), dtype=bool)
        c = collection_from_matrix(cells, np.array([0.1, 0.2, 0.3, 0.4]))
        report = combined_contribution(c, "accuracy", 3)
        assert report.groups == ()

    def test_joint_pair_reported(self):
        cells = np.array(
            [
                [True, True],
                [True, True],
                [False, True],
                [False, False],
                [True, False],
            ]
        )
        scores = np.array([0.9, 0.8, 0.1, 0.1, 0.1])
        c = collection_from_matrix(cells, scores)
        report = combined_contribution(c, "accuracy", 2)
        members = {g.members for g in report.groups}
        pair = (
            "d3m.primitives.family0.prim00.Common",
            "d3m.primitives.family1.prim01.Common",
        )
        assert pair in members
        singles = primitive_contributions(c, "accuracy").entries
        group = next(g for g in report.groups if g.members == pair)
        assert abs(group.correlation) > abs(singles[pair[0]].value)
        assert abs(group.correlation) > abs(singles[pair[1]].value)

    def test_k_out_of_range(self, fixture_collection):
        with pytest.raises(KOutOfRange):
            combined_contribution(fixture_collection, "accuracy", 1)
        with pytest.raises(KOutOfRange):
            combined_contribution(
                fixture_collection, "accuracy", len(fixture_collection.vocabulary) + 1
            )

    def test_subset_counter(self, fixture_collection):
        n = len(fixture_collection.vocabulary)
        report = combined_contribution(fixture_collection, "accuracy", 3)
        from math import comb

        assert report.subsets_evaluated == comb(n, 1) + comb(n, 2) + comb(n, 3)

    def test_reported_groups_dominate_subsets(self, fixture_collection):
        report = combined_contribution(fixture_collection, "accuracy", 3)
        singles = primitive_contributions(fixture_collection, "accuracy").entries
        pair_corr = {
            g.members: g.correlation
            for g in combined_contribution(fixture_collection, "accuracy", 2).groups
        }
        for g in report.groups:
            for member in g.members:
                b = singles[member].value
                assert abs(g.correlation) > abs(b if b is not None else 0.0)
            if len(g.members) == 3:
                for pair, corr in pair_corr.items():
                    if set(pair) <= set(g.members):
                        assert abs(g.correlation) > abs(corr)

    def test_agrees_with_bruteforce_oracle(self):
        rng = np.random.default_rng(77)
        for trial in range(60):
            n_prims = int(rng.integers(2, 9))
            n_pipes = int(rng.integers(3, 12))
            cells = random_usage(rng, n_pipes, n_prims)
            if cells is None or cells.shape[1] < 2:
                continue
            scores = rng.random(n_pipes)
            c = collection_from_matrix(cells, scores)
            k = int(min(3, len(c.vocabulary)))
            if k < 2:
                continue
            report = combined_contribution(c, "accuracy", k)
            expected = cpc_bruteforce(c, "accuracy", k)
            got = [(g.members, g.correlation, g.n_joint_usage) for g in report.groups]
            assert [g[0] for g in got] == [e[0] for e in expected], f"trial {trial}"
            for g, e in zip(got, expected):
                assert g[1] == pytest.approx(e[1], abs=1e-9)
                assert g[2] == e[2]
