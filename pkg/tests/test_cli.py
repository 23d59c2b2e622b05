import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from pipeprof.cli import load_bundle, main
from pipeprof.analytics import subset

from conftest import FIXTURE_DIR


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def bundle(tmp_path, runner):
    out = tmp_path / "bundle"
    result = runner.invoke(
        main,
        ["ingest", *sorted(str(p) for p in FIXTURE_DIR.glob("pipeline_*.json")),
         "--dataset", "heart_statlog", "--metric", "accuracy", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    return out


class TestIngest:
    def test_counts_line(self, bundle, runner, tmp_path):
        c = load_bundle(bundle)
        assert len(c.pipelines) == 10
        out = tmp_path / "b2"
        result = runner.invoke(
            main,
            ["ingest", *sorted(str(p) for p in FIXTURE_DIR.glob("pipeline_*.json")),
             "--out", str(out)],
        )
        assert f"10 pipelines, {len(c.vocabulary)} primitives" in result.output

    def test_unreadable_path_exit_2(self, runner, tmp_path):
        result = runner.invoke(
            main, ["ingest", str(tmp_path / "missing.json"), "--out", str(tmp_path / "b")]
        )
        assert result.exit_code == 2
        assert "missing.json" in result.output

    def test_duplicate_ids_exit_3(self, runner, tmp_path):
        src = FIXTURE_DIR / "pipeline_01.json"
        copy = tmp_path / "copy.json"
        copy.write_text(src.read_text())
        result = runner.invoke(
            main, ["ingest", str(src), str(copy), "--out", str(tmp_path / "b")]
        )
        assert result.exit_code == 3

    def test_invalid_document_exit_3(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        result = runner.invoke(main, ["ingest", str(bad), "--out", str(tmp_path / "b")])
        assert result.exit_code == 3


class TestReport:
    def test_report_files(self, bundle, runner, tmp_path):
        out = tmp_path / "report"
        result = runner.invoke(
            main, ["report", "--bundle", str(bundle), "--k", "3", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        for name in ("matrix.json", "matrix.csv", "contributions.json", "cpc.json",
                     "best_scores.json"):
            assert (out / name).exists()
        matrix = json.loads((out / "matrix.json").read_text())
        assert matrix["schema_version"] == "1"
        assert len(matrix["pipeline_ids"]) == 10

    def test_missing_metric_exit_4(self, bundle, runner, tmp_path):
        result = runner.invoke(
            main,
            ["report", "--bundle", str(bundle), "--metric", "f1_macro",
             "--out", str(tmp_path / "r")],
        )
        assert result.exit_code == 4

    def test_bad_k_exit_4(self, bundle, runner, tmp_path):
        result = runner.invoke(
            main,
            ["report", "--bundle", str(bundle), "--k", "1", "--out", str(tmp_path / "r")],
        )
        assert result.exit_code == 4

    def test_deterministic_outputs(self, bundle, runner, tmp_path):
        outs = []
        for name in ("r1", "r2"):
            out = tmp_path / name
            assert runner.invoke(
                main, ["report", "--bundle", str(bundle), "--out", str(out)]
            ).exit_code == 0
            outs.append(out)
        for name in ("matrix.json", "cpc.json", "contributions.json"):
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


class TestMerge:
    def test_single_id_is_own_dag(self, bundle, runner, tmp_path):
        out = tmp_path / "m"
        result = runner.invoke(
            main, ["merge", "--bundle", str(bundle), "--out", str(out), "heart-01"]
        )
        assert result.exit_code == 0, result.output
        doc = json.loads((out / "merged.json").read_text())
        assert len(doc["nodes"]) == 7  # 5 steps + terminals
        assert all(n["provenance"] == ["heart-01"] for n in doc["nodes"])
        assert (out / "merged.dot").read_text().startswith("digraph")

    def test_same_id_twice_self_merge(self, bundle, runner, tmp_path):
        out = tmp_path / "m"
        result = runner.invoke(
            main,
            ["merge", "--bundle", str(bundle), "--out", str(out),
             "heart-01", "heart-01"],
        )
        assert result.exit_code == 0
        doc = json.loads((out / "merged.json").read_text())
        assert len(doc["nodes"]) == 7

    def test_unknown_id_exit_5(self, bundle, runner, tmp_path):
        result = runner.invoke(
            main, ["merge", "--bundle", str(bundle), "--out", str(tmp_path / "m"), "nope"]
        )
        assert result.exit_code == 5


class TestExport:
    def test_keep_all_identity(self, bundle, runner, tmp_path):
        c = load_bundle(bundle)
        out = tmp_path / "exported"
        result = runner.invoke(
            main,
            ["export", "--bundle", str(bundle),
             "--keep", ",".join(c.pipeline_ids()), "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        c2 = load_bundle(out)
        assert c2.pipeline_ids() == c.pipeline_ids()
        assert c2.vocabulary == c.vocabulary

    def test_round_trip_subset(self, bundle, runner, tmp_path):
        keep = ["heart-01", "heart-05", "heart-10"]
        out = tmp_path / "exported"
        result = runner.invoke(
            main,
            ["export", "--bundle", str(bundle), "--keep", ",".join(keep),
             "--out", str(out)],
        )
        assert result.exit_code == 0
        c2 = load_bundle(out)
        expected = subset(load_bundle(bundle), keep)
        assert c2.pipeline_ids() == expected.pipeline_ids()
        assert c2.vocabulary == expected.vocabulary
        assert [p.scores for p in c2.pipelines] == [p.scores for p in expected.pipelines]

    def test_empty_subset_exit_4(self, bundle, runner, tmp_path):
        result = runner.invoke(
            main,
            ["export", "--bundle", str(bundle), "--keep", "", "--out", str(tmp_path / "e")],
        )
        assert result.exit_code == 4

    def test_unknown_keep_exit_5(self, bundle, runner, tmp_path):
        result = runner.invoke(
            main,
            ["export", "--bundle", str(bundle), "--keep", "nope", "--out", str(tmp_path / "e")],
        )
        assert result.exit_code == 5
