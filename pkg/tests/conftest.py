from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pipeprof.model import load_collection

FIXTURE_DIR = Path(__file__).parent.parent / "fixtures" / "heart_statlog"


def pytest_runtest_logreport(report):
    """One pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE {name}: {status}", flush=True)

PRIMITIVE_POOL = [
    ("d3m.primitives.data_transformation.denormalize.Common", "Denormalize"),
    ("d3m.primitives.data_transformation.dataset_to_dataframe.Common", "To DataFrame"),
    ("d3m.primitives.data_cleaning.imputer.SKlearn", "Imputer"),
    ("d3m.primitives.data_preprocessing.min_max_scaler.SKlearn", "Min Max Scaler"),
    ("d3m.primitives.feature_extraction.rbf_sampler.SKlearn", "RBF Sampler"),
    ("d3m.primitives.feature_selection.select_percentile.SKlearn", "Select Percentile"),
    ("d3m.primitives.classification.xgboost_gbtree.Common", "XGBoost GBTree"),
    ("d3m.primitives.classification.random_forest.SKlearn", "Random Forest"),
    ("d3m.primitives.classification.svc.SKlearn", "SVC"),
    ("d3m.primitives.regression.ridge.SKlearn", "Ridge"),
]


def fixture_documents() -> list[dict]:
    return [
        json.loads(p.read_text()) for p in sorted(FIXTURE_DIR.glob("pipeline_*.json"))
    ]


@pytest.fixture(scope="session")
def fixture_docs():
    return fixture_documents()


@pytest.fixture(scope="session")
def fixture_collection(fixture_docs):
    return load_collection(
        fixture_docs,
        {
            "task_type": "classification",
            "dataset_name": "heart_statlog",
            "primary_metric": "accuracy",
        },
        collection_id="heart_statlog",
    )


def make_linear_doc(
    pid: str,
    primitive_keys: list[int],
    scores: dict[str, float],
    source: str = "synthetic",
    hyperparams: dict[int, dict] | None = None,
) -> dict:
    """Linear pipeline document over PRIMITIVE_POOL indices."""
    hyperparams = hyperparams or {}
    steps = []
    for i, key in enumerate(primitive_keys):
        path, name = PRIMITIVE_POOL[key]
        steps.append(
            {
                "type": "PRIMITIVE",
                "primitive": {"python_path": path, "name": name},
                "arguments": {
                    "inputs": {
                        "data": "inputs.0" if i == 0 else f"steps.{i - 1}.produce"
                    }
                },
                "hyperparams": {
                    k: {"type": "VALUE", "data": v}
                    for k, v in hyperparams.get(i, {}).items()
                },
            }
        )
    return {
        "id": pid,
        "source": {"name": source},
        "inputs": [{"name": "inputs"}],
        "outputs": [{"data": f"steps.{len(steps) - 1}.produce"}],
        "steps": steps,
        "scores": [{"metric": m, "value": v} for m, v in scores.items()],
    }


def random_document(rng: np.random.Generator, pid: str) -> dict:
    """Random valid document: every step reaches back to a pipeline input."""
    n_steps = int(rng.integers(1, 7))
    steps = []
    for i in range(n_steps):
        path, name = PRIMITIVE_POOL[int(rng.integers(len(PRIMITIVE_POOL)))]
        if i == 0:
            refs = ["inputs.0"]
        else:
            n_refs = int(rng.integers(1, min(i, 2) + 1))
            producers = rng.choice(i, size=n_refs, replace=False)
            refs = [f"steps.{int(j)}.produce" for j in sorted(producers)]
            if rng.random() < 0.2:
                refs.append("inputs.0")
        steps.append(
            {
                "type": "PRIMITIVE",
                "primitive": {"python_path": path, "name": name},
                "arguments": {"inputs": {"data": refs}},
                "hyperparams": {
                    "alpha": {"type": "VALUE", "data": round(float(rng.random()), 3)}
                },
            }
        )
    return {
        "id": pid,
        "source": {"name": "synthetic"},
        "inputs": [{"name": "inputs"}],
        "outputs": [{"data": f"steps.{n_steps - 1}.produce"}],
        "steps": steps,
        "scores": [{"metric": "accuracy", "value": float(rng.random())}],
    }
