"""Content-addressed persistence for score reports.

A run's identity is the SHA-256 of its report's canonical JSON, so
identical inputs always map to the same run id and saving is naturally
idempotent.  Records are single JSON files written atomically
(temp file + rename); a record whose stored report no longer matches
its id is reported as corrupt rather than silently served.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .digests import content_digest
from .errors import StoreError
from .io import report_from_dict, report_to_dict
from .model import StrideReport

DEFAULT_STORE_ENV = "STRIDE_STORE"
DEFAULT_STORE_PATH = ".stride-runs"


@dataclass(frozen=True)
class RunRecord:
    """One persisted scoring run."""

    run_id: str
    timestamp: str
    manifest_digest: str
    config_digest: str
    report: StrideReport


def store_path_from_env(environ: dict | None = None) -> Path:
    """Resolve the store directory, honouring the STRIDE_STORE variable."""
    env = os.environ if environ is None else environ
    return Path(env.get(DEFAULT_STORE_ENV) or DEFAULT_STORE_PATH)


def run_id_for(report: StrideReport) -> str:
    """Content hash identifying a report; stable across identical inputs."""
    return content_digest(report_to_dict(report))


def _record_path(store: Path, run_id: str) -> Path:
    return store / f"{run_id}.json"


def save_run(report: StrideReport, store_path: Path | str) -> str:
    """Persist ``report``; returns its run id.

    Saving the same report twice keeps the single existing record.  A
    colliding record whose content does not match the id raises
    :class:`StoreError` instead of being overwritten.
    """
    store = Path(store_path)
    store.mkdir(parents=True, exist_ok=True)
    report_dict = report_to_dict(report)
    run_id = content_digest(report_dict)
    target = _record_path(store, run_id)
    if target.exists():
        existing = _read_record(target)
        if content_digest(existing["report"]) != run_id:
            raise StoreError(f"run {run_id}: stored content does not match its id")
        return run_id

    record = {
        "run_id": run_id,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "manifest_digest": report.manifest_digest,
        "config_digest": content_digest(report_dict["config"]),
        "report": report_dict,
    }
    # Write-rename keeps readers from ever seeing a partial record.
    fd, temp_name = tempfile.mkstemp(dir=store, prefix=f".{run_id[:12]}-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            json.dump(record, handle, indent=2, sort_keys=True)
            handle.write("\n")
        os.replace(temp_name, target)
    except BaseException:
        try:
            os.unlink(temp_name)
        except OSError:
            pass
        raise
    return run_id


def _read_record(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise StoreError(f"cannot read run record {path.name}: {exc}") from None


def resolve_run_id(run_id: str, store_path: Path | str) -> str:
    """Expand a unique run-id prefix to the full id."""
    store = Path(store_path)
    if not run_id or any(c not in "0123456789abcdef" for c in run_id):
        raise StoreError(f"run id must be a hex string, got {run_id!r}")
    if _record_path(store, run_id).exists():
        return run_id
    if not store.is_dir():
        raise StoreError(f"run store {store} does not exist")
    matches = sorted(
        entry.stem for entry in store.glob(f"{run_id}*.json") if not entry.name.startswith(".")
    )
    if not matches:
        raise StoreError(f"no run matches {run_id!r}")
    if len(matches) > 1:
        raise StoreError(f"run id prefix {run_id!r} is ambiguous: {', '.join(matches[:4])}...")
    return matches[0]


def load_run(run_id: str, store_path: Path | str) -> RunRecord:
    """Load a stored run, verifying its content against its id."""
    store = Path(store_path)
    full_id = resolve_run_id(run_id, store)
    raw = _read_record(_record_path(store, full_id))
    for key in ("run_id", "timestamp", "manifest_digest", "config_digest", "report"):
        if key not in raw:
            raise StoreError(f"run {full_id}: record missing field {key!r}")
    if raw["run_id"] != full_id:
        raise StoreError(f"run {full_id}: record carries mismatched id {raw['run_id']!r}")
    if content_digest(raw["report"]) != full_id:
        raise StoreError(f"run {full_id}: stored report does not match its id")
    report = report_from_dict(raw["report"])
    return RunRecord(
        run_id=raw["run_id"],
        timestamp=raw["timestamp"],
        manifest_digest=raw["manifest_digest"],
        config_digest=raw["config_digest"],
        report=report,
    )
