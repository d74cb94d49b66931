"""Weight-config normalisation and manifest invariant checks."""

from __future__ import annotations

import dataclasses
import random

import pytest

from manifest_factory import random_manifest
from stride.errors import SchemaError
from stride.model import (
    COMPONENT_METRICS,
    ComponentId,
    MetricId,
    SamplingInputs,
    WeightConfig,
    equal_weight_config,
    validate_manifest,
    validate_weight_config,
)

IM = MetricId.INCLUSIVENESS_MATERIALITY
AT = MetricId.AUDITABILITY_TRACEABILITY
ER = MetricId.EXEMPLARY_REFERENCE
TR = MetricId.TIME_RELEVANCE
HG = MetricId.HUMAN_GOVERNED
DE = MetricId.DOMAIN_EXPERT
IF = MetricId.ITERATIVE_FEEDBACK


def _config(weights=None, applicability=None, alpha=(0.25, 0.25, 0.25, 0.25)) -> WeightConfig:
    base_weights = {metric: 1.0 for metric in MetricId}
    base_mask = {metric: True for metric in MetricId}
    if weights:
        base_weights.update(weights)
    if applicability:
        base_mask.update(applicability)
    return WeightConfig(alpha=alpha, weights=base_weights, applicability=base_mask)


class TestWeightConfigValidation:
    def test_equal_config_is_uniform_per_component(self):
        config = equal_weight_config()
        for component, members in COMPONENT_METRICS.items():
            for metric in members:
                assert config.weights[metric] == pytest.approx(1.0 / len(members), abs=1e-15)
        assert config.alpha == (0.25, 0.25, 0.25, 0.25)

    def test_masked_metric_redistributes_weight(self):
        config = validate_weight_config(
            _config(
                weights={IM: 0.25, AT: 0.25, ER: 0.25, TR: 0.25},
                applicability={AT: False},
            )
        )
        assert config.weights[AT] == 0.0
        for metric in (IM, ER, TR):
            assert config.weights[metric] == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_intimacy_mask_drops_and_rescales(self):
        config = validate_weight_config(
            _config(weights={HG: 1.0, DE: 1.0, IF: 1.0}, applicability={IF: False})
        )
        assert config.weights[HG] == pytest.approx(0.5, abs=1e-15)
        assert config.weights[DE] == pytest.approx(0.5, abs=1e-15)
        assert config.weights[IF] == 0.0

    def test_alpha_is_not_renormalised(self):
        config = validate_weight_config(_config(alpha=(1.0, 1.0, 1.0, 1.0)))
        assert config.alpha == (1.0, 1.0, 1.0, 1.0)

    def test_negative_weight_rejected(self):
        with pytest.raises(SchemaError, match="negative weight"):
            validate_weight_config(_config(weights={ER: -0.1}))

    def test_negative_alpha_rejected(self):
        with pytest.raises(SchemaError, match="negative coefficient"):
            validate_weight_config(_config(alpha=(0.25, -0.25, 0.25, 0.25)))

    def test_component_with_no_applicable_metric_rejected(self):
        with pytest.raises(SchemaError, match="no applicable metric"):
            validate_weight_config(
                _config(applicability={MetricId.TRANSPARENCY: False, MetricId.ROLE_SEPARATION: False})
            )

    def test_all_zero_applicable_weights_rejected(self):
        with pytest.raises(SchemaError, match="sum to zero"):
            validate_weight_config(_config(weights={HG: 0.0, DE: 0.0, IF: 0.0}))

    def test_missing_metric_entry_rejected(self):
        weights = {metric: 1.0 for metric in MetricId}
        weights.pop(TR)
        config = WeightConfig(
            alpha=(0.25, 0.25, 0.25, 0.25),
            weights=weights,
            applicability={metric: True for metric in MetricId},
        )
        with pytest.raises(SchemaError, match="missing entry for TR"):
            validate_weight_config(config)

    def test_normalised_weights_sum_to_one_per_component(self):
        rng = random.Random(7)
        for _ in range(300):
            mask = {}
            for members in COMPONENT_METRICS.values():
                keep = rng.sample(members, rng.randint(1, len(members)))
                for metric in members:
                    mask[metric] = metric in keep
            weights = {metric: rng.uniform(0.0, 5.0) for metric in MetricId}
            for members in COMPONENT_METRICS.values():
                applicable = [m for m in members if mask[m]]
                if all(weights[m] == 0.0 for m in applicable):
                    weights[applicable[0]] = 1.0
            config = validate_weight_config(_config(weights=weights, applicability=mask))
            for members in COMPONENT_METRICS.values():
                total = sum(config.weights[m] for m in members)
                assert abs(total - 1.0) <= 1e-12

    def test_validation_is_idempotent(self):
        rng = random.Random(13)
        for _ in range(200):
            weights = {metric: rng.uniform(0.01, 5.0) for metric in MetricId}
            mask = {metric: rng.random() < 0.8 for metric in MetricId}
            for members in COMPONENT_METRICS.values():
                if not any(mask[m] for m in members):
                    mask[members[0]] = True
            once = validate_weight_config(_config(weights=weights, applicability=mask))
            twice = validate_weight_config(once)
            assert once == twice


class TestManifestValidation:
    def test_case_study_manifest_is_clean(self, luxshare_manifest):
        assert validate_manifest(luxshare_manifest) == []

    def test_random_manifests_are_clean(self):
        rng = random.Random(23)
        for _ in range(200):
            manifest = random_manifest(rng)
            assert validate_manifest(manifest) == []

    def test_bad_external_flag_reported_at_coverage(self, luxshare_manifest):
        coverage = dataclasses.replace(luxshare_manifest.coverage, external_data_flag=2)
        manifest = dataclasses.replace(luxshare_manifest, coverage=coverage)
        violations = validate_manifest(manifest)
        assert any(v.path == "coverage.external_data_flag" for v in violations)

    def test_covered_beyond_total_reported(self, luxshare_manifest):
        coverage = dataclasses.replace(luxshare_manifest.coverage, countries_covered=500)
        manifest = dataclasses.replace(luxshare_manifest, coverage=coverage)
        violations = validate_manifest(manifest)
        assert any(v.path == "coverage.countries_covered" for v in violations)

    def test_unknown_layer_reported(self, luxshare_manifest):
        coverage = dataclasses.replace(
            luxshare_manifest.coverage, standard_layers_covered=frozenset({"global", "galactic"})
        )
        manifest = dataclasses.replace(luxshare_manifest, coverage=coverage)
        violations = validate_manifest(manifest)
        assert any("galactic" in v.message for v in violations)

    def test_harmful_rows_beyond_total_reported(self, luxshare_manifest):
        safety = dataclasses.replace(luxshare_manifest.safety, harmful_rows=600)
        manifest = dataclasses.replace(luxshare_manifest, safety=safety)
        violations = validate_manifest(manifest)
        assert any(v.path == "safety.harmful_rows" for v in violations)

    def test_confidence_bounds_reported(self, luxshare_manifest):
        recognition = dataclasses.replace(luxshare_manifest.recognition, single_event_confidence=1.0)
        manifest = dataclasses.replace(luxshare_manifest, recognition=recognition)
        violations = validate_manifest(manifest)
        assert any(v.path == "recognition.single_event_confidence" for v in violations)

    def test_disclosed_beyond_required_reported(self, luxshare_manifest):
        governance = dataclasses.replace(luxshare_manifest.governance, assumptions_disclosed=3)
        manifest = dataclasses.replace(luxshare_manifest, governance=governance)
        violations = validate_manifest(manifest)
        assert any(v.path == "governance.assumptions_disclosed" for v in violations)

    def test_accuracy_series_bounds_reported(self, luxshare_manifest):
        governance = dataclasses.replace(luxshare_manifest.governance, accuracy_series=(0.4, 1.3))
        manifest = dataclasses.replace(luxshare_manifest, governance=governance)
        violations = validate_manifest(manifest)
        assert any(v.path == "governance.accuracy_series[1]" for v in violations)

    def test_sampling_inputs_threshold_reported(self, luxshare_manifest):
        manifest = dataclasses.replace(
            luxshare_manifest, sampling_inputs=SamplingInputs(sample_size=10, saturation_threshold=0, share_deviation=0.1)
        )
        violations = validate_manifest(manifest)
        assert any(v.path == "sampling_inputs.saturation_threshold" for v in violations)

    def test_negative_decay_reported(self, luxshare_manifest):
        temporal = dataclasses.replace(luxshare_manifest.temporal, decay_rate=0.0)
        manifest = dataclasses.replace(luxshare_manifest, temporal=temporal)
        violations = validate_manifest(manifest)
        assert any(v.path == "temporal.decay_rate" for v in violations)

    def test_violations_render_with_path(self, luxshare_manifest):
        temporal = dataclasses.replace(luxshare_manifest.temporal, decay_rate=-1.0)
        manifest = dataclasses.replace(luxshare_manifest, temporal=temporal)
        rendered = [str(v) for v in validate_manifest(manifest)]
        assert "temporal.decay_rate: must be positive" in rendered
