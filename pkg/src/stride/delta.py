"""Rating discrepancy analysis between a baseline rater and a recomputation.

Given two issue-level rating records, the pipeline is: diff the shared
issue keys, attach human-supplied classifications with interval-valued
adjustments, and fold the item adjustments into a net interval.  The
tool never invents a classification beyond the fallback bucket for
unannotated non-zero differences, and it never rescales scores; scale
mismatches are reported as found.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Mapping, Sequence

from .errors import SchemaError
from .model import SPEC_VERSION


class DiscrepancyCategory(str, Enum):
    """Buckets an analyst can assign to one rating difference."""

    DEFINITION_AMBIGUITY = "definition_ambiguity"
    OVER_PENALIZATION = "over_penalization"
    UNDER_PENALIZATION = "under_penalization"
    OTHER_SCORING_ERROR = "other_scoring_error"


@dataclass(frozen=True)
class Interval:
    """A closed real interval; degenerate intervals carry a point value."""

    lower: float
    upper: float

    def __add__(self, other: Interval) -> Interval:
        return Interval(self.lower + other.lower, self.upper + other.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


ZERO_INTERVAL = Interval(0.0, 0.0)


def validate_interval(interval: Interval, path: str = "interval") -> Interval:
    if interval.lower > interval.upper:
        raise SchemaError(f"{path}: lower bound {interval.lower!r} exceeds upper bound {interval.upper!r}")
    return interval


@dataclass(frozen=True)
class IssueScore:
    """One issue-level score with the scale it was assigned on."""

    score: float
    scale_min: float
    scale_max: float
    methodology_citation: str = ""


@dataclass(frozen=True)
class RatingRecord:
    """A dated, per-issue rating from one source."""

    source_label: str
    period_start: date
    period_end: date
    overall_rating: str
    issue_scores: Mapping[str, IssueScore]


@dataclass(frozen=True)
class RatingDiff:
    """Per-issue difference between two rating records.

    ``delta`` is recomputed minus baseline and is absent when either
    side is missing the issue.  ``scale_mismatch`` marks issues the two
    records scored on different scales; their deltas are still reported
    without any rescaling.
    """

    issue_key: str
    baseline_score: float | None
    stride_score: float | None
    delta: float | None
    scale_mismatch: bool


@dataclass(frozen=True)
class Annotation:
    """Analyst-supplied classification for one diffed issue."""

    category: DiscrepancyCategory
    adjustment: Interval
    evidence_refs: tuple[str, ...] = ()
    narrative: str = ""
    stride_assessment: Interval | None = None  # overrides the point score on display


@dataclass(frozen=True)
class DiscrepancyItem:
    """One classified discrepancy with its score adjustment interval."""

    issue_key: str
    baseline_score: float | None
    stride_assessment: Interval | None
    category: DiscrepancyCategory
    adjustment: Interval
    evidence_refs: tuple[str, ...]
    narrative: str


@dataclass(frozen=True)
class DeltaReport:
    """Classified discrepancy items plus their net adjustment."""

    items: tuple[DiscrepancyItem, ...]
    net_adjustment: Interval
    baseline_overall: str = ""
    notes: str = ""


def _validate_record(record: RatingRecord, label: str) -> None:
    for key, issue in record.issue_scores.items():
        path = f"{label}.issue_scores[{key!r}]"
        if issue.scale_min >= issue.scale_max:
            raise SchemaError(f"{path}: scale_min must be below scale_max")
        if not issue.scale_min <= issue.score <= issue.scale_max:
            raise SchemaError(
                f"{path}: score {issue.score!r} outside scale [{issue.scale_min!r}, {issue.scale_max!r}]"
            )


def diff_ratings(baseline: RatingRecord, stride: RatingRecord) -> tuple[RatingDiff, ...]:
    """One diff per issue key present in either record, ordered by key."""
    _validate_record(baseline, "baseline")
    _validate_record(stride, "stride")
    diffs = []
    for key in sorted(set(baseline.issue_scores) | set(stride.issue_scores)):
        base = baseline.issue_scores.get(key)
        ours = stride.issue_scores.get(key)
        mismatch = (
            base is not None
            and ours is not None
            and (base.scale_min != ours.scale_min or base.scale_max != ours.scale_max)
        )
        delta = ours.score - base.score if base is not None and ours is not None else None
        diffs.append(
            RatingDiff(
                issue_key=key,
                baseline_score=None if base is None else base.score,
                stride_score=None if ours is None else ours.score,
                delta=delta,
                scale_mismatch=mismatch,
            )
        )
    return tuple(diffs)


def attach_classification(
    diffs: Sequence[RatingDiff],
    annotations: Mapping[str, Annotation],
) -> tuple[DiscrepancyItem, ...]:
    """Turn diffs into classified items.

    Annotated diffs take the analyst's category and adjustment.
    Unannotated diffs with a non-zero delta fall back to
    ``other_scoring_error`` with the degenerate interval [delta, delta].
    Zero or one-sided diffs without an annotation produce no item.
    """
    keys = {diff.issue_key for diff in diffs}
    for key in annotations:
        if key not in keys:
            raise SchemaError(f"annotation for unknown issue key {key!r}")

    items = []
    for diff in diffs:
        annotation = annotations.get(diff.issue_key)
        if annotation is not None:
            validate_interval(annotation.adjustment, f"annotations[{diff.issue_key!r}].adjustment")
            if annotation.stride_assessment is not None:
                assessment = validate_interval(
                    annotation.stride_assessment,
                    f"annotations[{diff.issue_key!r}].stride_assessment",
                )
            elif diff.stride_score is not None:
                assessment = Interval(diff.stride_score, diff.stride_score)
            else:
                assessment = None
            items.append(
                DiscrepancyItem(
                    issue_key=diff.issue_key,
                    baseline_score=diff.baseline_score,
                    stride_assessment=assessment,
                    category=annotation.category,
                    adjustment=annotation.adjustment,
                    evidence_refs=annotation.evidence_refs,
                    narrative=annotation.narrative,
                )
            )
        elif diff.delta is not None and diff.delta != 0:
            items.append(
                DiscrepancyItem(
                    issue_key=diff.issue_key,
                    baseline_score=diff.baseline_score,
                    stride_assessment=Interval(diff.stride_score, diff.stride_score),
                    category=DiscrepancyCategory.OTHER_SCORING_ERROR,
                    adjustment=Interval(diff.delta, diff.delta),
                    evidence_refs=(),
                    narrative="",
                )
            )
    return tuple(items)


def net_adjustment(items: Sequence[DiscrepancyItem]) -> Interval:
    """Endpoint-wise sum of item adjustments; [0, 0] for no items."""
    total = ZERO_INTERVAL
    for item in items:
        total = total + item.adjustment
    return total


def build_delta_report(
    baseline: RatingRecord,
    stride: RatingRecord,
    annotations: Mapping[str, Annotation],
) -> DeltaReport:
    """Run the full diff-classify-net pipeline and collect caveats."""
    diffs = diff_ratings(baseline, stride)
    items = attach_classification(diffs, annotations)
    notes = []
    mismatched = [d.issue_key for d in diffs if d.scale_mismatch]
    if mismatched:
        notes.append("scales differ on: " + ", ".join(mismatched))
    one_sided = [d.issue_key for d in diffs if d.delta is None]
    if one_sided:
        notes.append("scored on one side only: " + ", ".join(one_sided))
    return DeltaReport(
        items=items,
        net_adjustment=net_adjustment(items),
        baseline_overall=baseline.overall_rating,
        notes="; ".join(notes),
    )


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------


def format_signed(value: float) -> str:
    """Signed compact number, e.g. +1.2, -0.85, +0.1."""
    return f"{value:+.4g}"


def format_interval(interval: Interval) -> str:
    if interval.lower == interval.upper:
        return format_signed(interval.lower)
    return f"{format_signed(interval.lower)} to {format_signed(interval.upper)}"


def _item_dict(item: DiscrepancyItem) -> dict:
    return {
        "issue_key": item.issue_key,
        "baseline_score": item.baseline_score,
        "stride_assessment": None
        if item.stride_assessment is None
        else {"lower": item.stride_assessment.lower, "upper": item.stride_assessment.upper},
        "category": item.category.value,
        "adjustment": {"lower": item.adjustment.lower, "upper": item.adjustment.upper},
        "evidence_refs": list(item.evidence_refs),
        "narrative": item.narrative,
    }


def emit_delta_report(
    items: Sequence[DiscrepancyItem],
    format: str = "json",
    baseline_overall: str = "",
    notes: str = "",
) -> str:
    """Render items and their net adjustment as a JSON or markdown document.

    Output is a pure function of the arguments: same items, same bytes.
    """
    net = net_adjustment(items)
    if format == "json":
        document = {
            "spec_version": SPEC_VERSION,
            "baseline_overall": baseline_overall,
            "items": [_item_dict(item) for item in items],
            "net_adjustment": {"lower": net.lower, "upper": net.upper},
            "notes": notes,
        }
        return json.dumps(document, indent=2, sort_keys=True) + "\n"
    if format == "markdown":
        return _markdown_report(items, net, baseline_overall, notes)
    raise SchemaError(f"unknown report format {format!r}")


def _markdown_report(
    items: Sequence[DiscrepancyItem],
    net: Interval,
    baseline_overall: str,
    notes: str,
) -> str:
    lines = ["# Rating discrepancy report", ""]
    if baseline_overall:
        lines += [f"Baseline overall rating: {baseline_overall}", ""]
    for item in items:
        baseline_text = "not scored" if item.baseline_score is None else f"{item.baseline_score:g}"
        if item.stride_assessment is None:
            ours_text = "not scored"
        elif item.stride_assessment.lower == item.stride_assessment.upper:
            ours_text = f"{item.stride_assessment.lower:g}"
        else:
            ours_text = f"{item.stride_assessment.lower:g} to {item.stride_assessment.upper:g}"
        lines += [
            f"## {item.issue_key}",
            "",
            f"**Finding:** baseline score {baseline_text}; recomputed assessment {ours_text}.",
            "",
            "**Reference definition:** " + ("; ".join(item.evidence_refs) if item.evidence_refs else "none cited"),
            "",
            "**Analysis:** " + (item.narrative or "no analyst narrative"),
            "",
            f"**Conclusion:** {item.category.value}; adjustment {format_interval(item.adjustment)}.",
            "",
        ]
    if not items:
        lines += ["No discrepancies.", ""]
    lines += [f"**Net adjustment: {format_interval(net)}**"]
    if notes:
        lines += ["", f"Notes: {notes}"]
    return "\n".join(lines) + "\n"
