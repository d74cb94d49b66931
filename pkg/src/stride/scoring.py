"""The trust equation: thirteen leaf metrics, four components, one score.

Each leaf metric is a small closed-form expression over one manifest
section.  Components are convex combinations of their applicable leaf
metrics, and the trust value is a logistic squash of the weighted
component sum, with the self-serving component entering negatively:

    trust = sigmoid(a_C * C + a_R * R + a_I * I - a_S * S)

Metrics that cannot be evaluated for a given manifest (no evidence
items, no annotation block, a too-short accuracy series, nothing to
disclose) return ``None`` instead of a number; the component step then
renormalises the remaining weights.  All arithmetic is plain double
precision, and rounding is left to presentation code.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .digests import content_digest
from .errors import ComputationError, SchemaError
from .model import (
    COMPONENT_METRICS,
    AgilityStats,
    AnnotationStats,
    ComponentId,
    CoverageProfile,
    DatasetManifest,
    EvidenceItem,
    GovernanceStats,
    MetricId,
    RecognitionProfile,
    SafetyAudit,
    StrideReport,
    SubScore,
    TemporalProfile,
    WeightConfig,
    validate_manifest,
    validate_weight_config,
)

# Internal mixing weights used when scoring whole manifests.  The
# methodology metric splits evenly between saturation and share spread;
# the ground-truth metric splits evenly across its four terms.
METHODOLOGY_WEIGHTS = (0.5, 0.5)
GROUND_TRUTH_WEIGHTS = (0.25, 0.25, 0.25, 0.25)

_WEIGHT_SUM_TOLERANCE = 1e-9


def sigmoid(z: float) -> float:
    """Logistic function, kept strictly inside (0, 1) even at extreme inputs."""
    if z >= 0:
        value = 1.0 / (1.0 + math.exp(-z))
    else:
        # exp(z) underflows to 0 rather than overflowing for very negative z
        expz = math.exp(z)
        value = expz / (1.0 + expz)
    if value == 1.0:
        return math.nextafter(1.0, 0.0)
    if value == 0.0:
        return math.nextafter(0.0, 1.0)
    return value


# ---------------------------------------------------------------------------
# Leaf metrics
# ---------------------------------------------------------------------------


def inclusiveness_materiality(coverage: CoverageProfile) -> float:
    """Geometric mean of coverage ratios and the external-data factor."""
    if coverage.countries_total <= 0:
        raise ComputationError("coverage.countries_total must be positive")
    if coverage.industries_total <= 0:
        raise ComputationError("coverage.industries_total must be positive")
    if coverage.standard_layers_total <= 0:
        raise ComputationError("coverage.standard_layers_total must be positive")
    geographic = coverage.countries_covered / coverage.countries_total
    industry = coverage.industries_covered / coverage.industries_total
    layers = len(coverage.standard_layers_covered) / coverage.standard_layers_total
    external = 1.0 / (1.0 + math.exp(coverage.external_data_flag - 0.5))
    return (geographic * industry * layers * external) ** 0.25


def auditability_traceability(evidence: Sequence[EvidenceItem]) -> float | None:
    """Mean of per-item audit/trace quality; ``None`` when there is no evidence."""
    if not evidence:
        return None
    return sum((item.auditability + item.traceability) / 2.0 for item in evidence) / len(evidence)


def exemplary_reference(recognition: RecognitionProfile) -> float:
    """Probability that at least one of n recognition events holds up."""
    if recognition.recognitions_per_year < 0:
        raise ComputationError("recognition.recognitions_per_year must be non-negative")
    if not 0 < recognition.single_event_confidence < 1:
        raise ComputationError("recognition.single_event_confidence must be strictly between 0 and 1")
    return 1.0 - (1.0 - recognition.single_event_confidence) ** recognition.recognitions_per_year


def time_relevance(temporal: TemporalProfile) -> float:
    """Exponential decay of relevance with data age."""
    if temporal.lag_years < 0:
        raise ComputationError("temporal.lag_years must be non-negative")
    if temporal.decay_rate <= 0:
        raise ComputationError("temporal.decay_rate must be positive")
    return math.exp(-temporal.decay_rate * temporal.lag_years)


def statistical_methodology(
    sample_size: int,
    saturation_threshold: int,
    share_deviation: float,
    saturation_weight: float = METHODOLOGY_WEIGHTS[0],
    representativeness_weight: float = METHODOLOGY_WEIGHTS[1],
) -> float:
    """Weighted blend of sample saturation and share-spread representativeness."""
    if saturation_threshold <= 0:
        raise ComputationError("saturation_threshold must be positive")
    if saturation_weight < 0 or representativeness_weight < 0:
        raise ComputationError("methodology weights must be non-negative")
    if abs(saturation_weight + representativeness_weight - 1.0) > _WEIGHT_SUM_TOLERANCE:
        raise ComputationError("methodology weights must sum to 1")
    saturation = min(1.0, sample_size / saturation_threshold)
    return saturation_weight * saturation + representativeness_weight * (1.0 - share_deviation)


def ground_truth(
    stats: AnnotationStats,
    weights: tuple[float, float, float, float] = GROUND_TRUTH_WEIGHTS,
) -> float:
    """Annotation quality: human share, tenure, and the two deviation terms.

    The deviation terms add as given, so the result can exceed 1.
    """
    if stats.tenure_cap_years <= 0:
        raise ComputationError("annotation.tenure_cap_years must be positive")
    if any(w < 0 for w in weights):
        raise ComputationError("ground-truth weights must be non-negative")
    if abs(sum(weights) - 1.0) > _WEIGHT_SUM_TOLERANCE:
        raise ComputationError("ground-truth weights must sum to 1")
    tenure = min(1.0, stats.mean_tenure_years / stats.tenure_cap_years)
    return (
        weights[0] * stats.human_fraction
        + weights[1] * tenure
        + weights[2] * stats.human_machine_deviation
        + weights[3] * stats.machine_machine_deviation
    )


def agility(stats: AgilityStats) -> float:
    """Accuracy gain per unit of change, clamped into [0, 1]."""
    if stats.epsilon <= 0:
        raise ComputationError("agility.epsilon must be positive")
    ratio = stats.accuracy_gain / (stats.change_proportion + stats.epsilon)
    return min(1.0, max(0.0, ratio))


def security_safety(audit: SafetyAudit) -> float:
    """Share of audited rows free of harmful content."""
    if audit.total_rows <= 0:
        raise ComputationError("safety.total_rows must be positive")
    return 1.0 - audit.harmful_rows / audit.total_rows


def human_governed(stats: GovernanceStats) -> float:
    """Share of governed cases that saw a human intervention."""
    if stats.governed_cases <= 0:
        raise ComputationError("governance.governed_cases must be positive")
    return stats.interventions / stats.governed_cases


def domain_expert(stats: GovernanceStats) -> float:
    """Mean of expert-involvement share and expert-staffed stage share."""
    if stats.experts_total <= 0:
        raise ComputationError("governance.experts_total must be positive")
    if stats.stages_total <= 0:
        raise ComputationError("governance.stages_total must be positive")
    experts = stats.experts_involved / stats.experts_total
    stages = stats.stages_with_experts / stats.stages_total
    return (experts + stages) / 2.0


def iterative_feedback(accuracy_series: Sequence[float]) -> float | None:
    """Mean step-to-step accuracy change; ``None`` for fewer than two points."""
    if len(accuracy_series) < 2:
        return None
    steps = len(accuracy_series) - 1
    return sum(accuracy_series[t] - accuracy_series[t - 1] for t in range(1, len(accuracy_series))) / steps


def transparency(stats: GovernanceStats) -> float | None:
    """Share of required assumptions disclosed; ``None`` when none are required."""
    if stats.assumptions_required < 0:
        raise ComputationError("governance.assumptions_required must be non-negative")
    if stats.assumptions_required == 0:
        return None
    return stats.assumptions_disclosed / stats.assumptions_required


def role_separation(stats: GovernanceStats) -> float:
    """Share of role relations kept separated."""
    if stats.role_relations_total <= 0:
        raise ComputationError("governance.role_relations_total must be positive")
    return stats.role_relations_separated / stats.role_relations_total


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentTerm:
    """One applicable metric's share of a component score."""

    metric_id: MetricId
    weight: float
    value: float
    contribution: float


@dataclass(frozen=True)
class ComponentBreakdown:
    """A component score with its renormalised weighted terms."""

    component_id: ComponentId
    terms: tuple[ComponentTerm, ...]
    total: float


def component_score(
    component_id: ComponentId,
    sub_scores: Iterable[SubScore],
    config: WeightConfig,
) -> ComponentBreakdown:
    """Convex combination of a component's applicable sub-scores.

    Weights are taken from ``config`` and renormalised over the
    sub-scores that are actually applicable, so listed term weights
    always sum to one.
    """
    by_id = {sub.metric_id: sub for sub in sub_scores}
    applicable = [
        by_id[metric]
        for metric in COMPONENT_METRICS[component_id]
        if metric in by_id and by_id[metric].applicable
    ]
    if not applicable:
        raise ComputationError(f"component {component_id.value}: no applicable sub-score")
    raw_total = sum(config.weights[sub.metric_id] for sub in applicable)
    if raw_total == 0:
        raise ComputationError(f"component {component_id.value}: applicable weights sum to zero")
    rescale = abs(raw_total - 1.0) > 1e-12

    terms = []
    for sub in applicable:
        if sub.value is None:
            raise ComputationError(f"{sub.metric_id.value}: applicable sub-score without a value")
        weight = config.weights[sub.metric_id] / raw_total if rescale else config.weights[sub.metric_id]
        terms.append(ComponentTerm(sub.metric_id, weight, sub.value, weight * sub.value))
    total = sum(term.contribution for term in terms)
    return ComponentBreakdown(component_id, tuple(terms), total)


def trust_score(
    credibility: float,
    reliability: float,
    intimacy: float,
    self_serving: float,
    alpha: tuple[float, float, float, float],
) -> float:
    """Squash the weighted component sum; self-serving counts against trust."""
    a_c, a_r, a_i, a_s = alpha
    return sigmoid(a_c * credibility + a_r * reliability + a_i * intimacy - a_s * self_serving)


# ---------------------------------------------------------------------------
# Whole-manifest scoring
# ---------------------------------------------------------------------------


def _metric_inputs(metric: MetricId, manifest: DatasetManifest) -> object:
    """The manifest slice a metric reads, used for its inputs digest."""
    governance = manifest.governance
    if metric is MetricId.INCLUSIVENESS_MATERIALITY:
        return asdict(manifest.coverage)
    if metric is MetricId.AUDITABILITY_TRACEABILITY:
        return [asdict(item) for item in manifest.evidence]
    if metric is MetricId.EXEMPLARY_REFERENCE:
        return asdict(manifest.recognition)
    if metric is MetricId.TIME_RELEVANCE:
        return asdict(manifest.temporal)
    if metric is MetricId.STATISTICAL_METHODOLOGY:
        return None if manifest.sampling_inputs is None else asdict(manifest.sampling_inputs)
    if metric is MetricId.GROUND_TRUTH:
        return None if manifest.annotation is None else asdict(manifest.annotation)
    if metric is MetricId.AGILITY:
        return None if manifest.agility is None else asdict(manifest.agility)
    if metric is MetricId.SECURITY_SAFETY:
        return asdict(manifest.safety)
    if metric is MetricId.HUMAN_GOVERNED:
        return {"interventions": governance.interventions, "governed_cases": governance.governed_cases}
    if metric is MetricId.DOMAIN_EXPERT:
        return {
            "experts_involved": governance.experts_involved,
            "experts_total": governance.experts_total,
            "stages_with_experts": governance.stages_with_experts,
            "stages_total": governance.stages_total,
        }
    if metric is MetricId.ITERATIVE_FEEDBACK:
        return {"accuracy_series": list(governance.accuracy_series)}
    if metric is MetricId.TRANSPARENCY:
        return {
            "assumptions_disclosed": governance.assumptions_disclosed,
            "assumptions_required": governance.assumptions_required,
        }
    if metric is MetricId.ROLE_SEPARATION:
        return {
            "role_relations_separated": governance.role_relations_separated,
            "role_relations_total": governance.role_relations_total,
        }
    raise KeyError(metric)


def _evaluate_metric(metric: MetricId, manifest: DatasetManifest) -> float | None:
    """Evaluate one metric on manifest data; ``None`` means not applicable."""
    if metric is MetricId.INCLUSIVENESS_MATERIALITY:
        return inclusiveness_materiality(manifest.coverage)
    if metric is MetricId.AUDITABILITY_TRACEABILITY:
        return auditability_traceability(manifest.evidence)
    if metric is MetricId.EXEMPLARY_REFERENCE:
        return exemplary_reference(manifest.recognition)
    if metric is MetricId.TIME_RELEVANCE:
        return time_relevance(manifest.temporal)
    if metric is MetricId.STATISTICAL_METHODOLOGY:
        if manifest.sampling_inputs is None:
            return None
        si = manifest.sampling_inputs
        return statistical_methodology(si.sample_size, si.saturation_threshold, si.share_deviation)
    if metric is MetricId.GROUND_TRUTH:
        if manifest.annotation is None:
            return None
        return ground_truth(manifest.annotation)
    if metric is MetricId.AGILITY:
        if manifest.agility is None:
            return None
        return agility(manifest.agility)
    if metric is MetricId.SECURITY_SAFETY:
        return security_safety(manifest.safety)
    if metric is MetricId.HUMAN_GOVERNED:
        return human_governed(manifest.governance)
    if metric is MetricId.DOMAIN_EXPERT:
        return domain_expert(manifest.governance)
    if metric is MetricId.ITERATIVE_FEEDBACK:
        return iterative_feedback(manifest.governance.accuracy_series)
    if metric is MetricId.TRANSPARENCY:
        return transparency(manifest.governance)
    if metric is MetricId.ROLE_SEPARATION:
        return role_separation(manifest.governance)
    raise KeyError(metric)


def score_dataset(manifest: DatasetManifest, config: WeightConfig) -> StrideReport:
    """Score one manifest under one weight configuration.

    Validates both inputs, evaluates every leaf metric (marking the ones
    the manifest cannot support as inapplicable), folds components, and
    squashes the trust value.  The returned report carries the
    normalised configuration and content digests for reproducibility.
    """
    violations = validate_manifest(manifest)
    if violations:
        details = "; ".join(str(v) for v in violations)
        raise SchemaError(f"manifest validation failed: {details}")
    normalised = validate_weight_config(config)

    sub_scores = []
    for metric in MetricId:
        digest = content_digest(_metric_inputs(metric, manifest))
        if not normalised.applicability[metric]:
            sub_scores.append(SubScore(metric, None, False, digest))
            continue
        value = _evaluate_metric(metric, manifest)
        sub_scores.append(SubScore(metric, value, value is not None, digest))

    breakdowns = {
        component: component_score(component, sub_scores, normalised)
        for component in ComponentId
    }
    components = {component: breakdown.total for component, breakdown in breakdowns.items()}
    trust = trust_score(
        components[ComponentId.CREDIBILITY],
        components[ComponentId.RELIABILITY],
        components[ComponentId.INTIMACY],
        components[ComponentId.SELF_SERVING],
        normalised.alpha,
    )

    return StrideReport(
        sub_scores=tuple(sub_scores),
        component_scores=components,
        trust=trust,
        config_snapshot=normalised,
        manifest_digest=content_digest(asdict(manifest)),
    )


def component_breakdowns(report: StrideReport) -> dict[ComponentId, ComponentBreakdown]:
    """Recompute per-component term breakdowns from a finished report."""
    return {
        component: component_score(component, report.sub_scores, report.config_snapshot)
        for component in ComponentId
    }
