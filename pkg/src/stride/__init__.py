"""Trust scoring for benchmark datasets and rating discrepancy analysis.

The package has four working parts: a scoring engine that turns a
dataset manifest into a trust report, sampling diagnostics built on
Jensen-Shannon divergence, a discrepancy pipeline that diffs two rating
records and folds analyst adjustments into a net interval, and a small
content-addressed store for finished runs.  The ``stride`` console
script fronts all of it.
"""

from .delta import (
    Annotation,
    DeltaReport,
    DiscrepancyCategory,
    DiscrepancyItem,
    Interval,
    IssueScore,
    RatingDiff,
    RatingRecord,
    attach_classification,
    build_delta_report,
    diff_ratings,
    emit_delta_report,
    net_adjustment,
)
from .errors import ComputationError, SchemaError, StoreError, StrideError
from .model import (
    SPEC_VERSION,
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
    SamplingInputs,
    StrideReport,
    SubScore,
    TemporalProfile,
    Violation,
    WeightConfig,
    equal_weight_config,
    validate_manifest,
    validate_weight_config,
)
from .runstore import RunRecord, load_run, run_id_for, save_run
from .sampling import (
    Distribution,
    PopulationRecord,
    SaturationPoint,
    SelectionResult,
    aggregate_divergence,
    categorical_distribution,
    js_divergence,
    representativeness_sigma,
    saturation_curve,
    select_representative_sample,
)
from .scoring import (
    ComponentBreakdown,
    ComponentTerm,
    component_score,
    score_dataset,
    sigmoid,
    trust_score,
)

__version__ = "0.1.0"
