"""Content-addressed run persistence."""

from __future__ import annotations

import dataclasses
import json

import pytest

from stride.errors import StoreError
from stride.io import report_to_dict
from stride.runstore import (
    load_run,
    resolve_run_id,
    run_id_for,
    save_run,
    store_path_from_env,
)
from stride.scoring import score_dataset


@pytest.fixture()
def report(luxshare_manifest, equal_config):
    return score_dataset(luxshare_manifest, equal_config)


class TestSaveAndLoad:
    def test_run_id_is_the_report_content_hash(self, report, tmp_path):
        run_id = save_run(report, tmp_path)
        assert run_id == run_id_for(report)
        assert len(run_id) == 64
        assert (tmp_path / f"{run_id}.json").exists()

    def test_saving_twice_is_idempotent(self, report, tmp_path):
        first = save_run(report, tmp_path)
        before = (tmp_path / f"{first}.json").read_text()
        second = save_run(report, tmp_path)
        after = (tmp_path / f"{first}.json").read_text()
        assert first == second
        assert before == after
        assert len(list(tmp_path.glob("*.json"))) == 1

    def test_load_round_trips_the_report(self, report, tmp_path):
        run_id = save_run(report, tmp_path)
        record = load_run(run_id, tmp_path)
        assert record.run_id == run_id
        assert record.report == report
        assert record.manifest_digest == report.manifest_digest
        assert record.timestamp

    def test_loaded_record_rejects_tampering(self, report, tmp_path):
        run_id = save_run(report, tmp_path)
        path = tmp_path / f"{run_id}.json"
        raw = json.loads(path.read_text())
        raw["report"]["trust"] = 0.9
        path.write_text(json.dumps(raw))
        with pytest.raises(StoreError, match="does not match its id"):
            load_run(run_id, tmp_path)

    def test_unreadable_record_is_reported(self, report, tmp_path):
        run_id = save_run(report, tmp_path)
        (tmp_path / f"{run_id}.json").write_text("{not json")
        with pytest.raises(StoreError, match="cannot read run record"):
            load_run(run_id, tmp_path)

    def test_record_missing_fields_is_reported(self, report, tmp_path):
        run_id = save_run(report, tmp_path)
        path = tmp_path / f"{run_id}.json"
        raw = json.loads(path.read_text())
        del raw["config_digest"]
        path.write_text(json.dumps(raw))
        with pytest.raises(StoreError, match="missing field 'config_digest'"):
            load_run(run_id, tmp_path)

    def test_different_configs_store_separately(self, report, luxshare_manifest, tmp_path):
        from stride.model import MetricId, WeightConfig, validate_weight_config

        other_config = validate_weight_config(
            WeightConfig(
                alpha=(0.4, 0.3, 0.2, 0.1),
                weights={metric: 1.0 for metric in MetricId},
                applicability={metric: True for metric in MetricId},
            )
        )
        other = score_dataset(luxshare_manifest, other_config)
        first = save_run(report, tmp_path)
        second = save_run(other, tmp_path)
        assert first != second
        assert len(list(tmp_path.glob("*.json"))) == 2


class TestResolution:
    def test_unique_prefix_resolves(self, report, tmp_path):
        run_id = save_run(report, tmp_path)
        assert resolve_run_id(run_id[:10], tmp_path) == run_id
        assert load_run(run_id[:10], tmp_path).run_id == run_id

    def test_unknown_prefix_is_reported(self, report, tmp_path):
        save_run(report, tmp_path)
        with pytest.raises(StoreError, match="no run matches"):
            resolve_run_id("f" * 12 if not run_id_for(report).startswith("f") else "0" * 12, tmp_path)

    def test_ambiguous_prefix_is_reported(self, report, tmp_path):
        run_id = save_run(report, tmp_path)
        sibling = dict(json.loads((tmp_path / f"{run_id}.json").read_text()))
        forged = run_id[:8] + ("0" if run_id[8] != "0" else "1") + run_id[9:]
        (tmp_path / f"{forged}.json").write_text(json.dumps(sibling))
        with pytest.raises(StoreError, match="ambiguous"):
            resolve_run_id(run_id[:8], tmp_path)

    def test_non_hex_run_id_is_rejected(self, tmp_path):
        with pytest.raises(StoreError, match="must be a hex string"):
            resolve_run_id("../escape", tmp_path)

    def test_missing_store_is_reported(self, tmp_path):
        with pytest.raises(StoreError, match="does not exist"):
            resolve_run_id("abc123", tmp_path / "never-created")


class TestStorePath:
    def test_environment_variable_wins(self):
        assert store_path_from_env({"STRIDE_STORE": "/tmp/custom-store"}).name == "custom-store"

    def test_default_path(self):
        assert str(store_path_from_env({})) == ".stride-runs"


class TestRunIdStability:
    def test_identical_reports_share_an_id(self, report, luxshare_manifest, equal_config):
        again = score_dataset(luxshare_manifest, equal_config)
        assert run_id_for(report) == run_id_for(again)

    def test_id_tracks_report_content(self, report):
        shifted = dataclasses.replace(report, trust=report.trust + 1e-9)
        assert run_id_for(shifted) != run_id_for(report)

    def test_id_is_the_digest_of_the_report_document(self, report):
        from stride.digests import content_digest

        assert run_id_for(report) == content_digest(report_to_dict(report))
