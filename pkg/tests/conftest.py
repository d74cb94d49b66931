"""Shared fixtures: the bundled case-study documents, parsed once."""

from __future__ import annotations

import pytest

from stride.fixtures import fixture_text
from stride.io import parse_annotations, parse_manifest, parse_rating_record
from stride.model import equal_weight_config


@pytest.fixture(scope="session")
def luxshare_manifest():
    return parse_manifest(fixture_text("luxshare_manifest.json"))


@pytest.fixture(scope="session")
def equal_config():
    return equal_weight_config()


@pytest.fixture(scope="session")
def luxshare_baseline():
    return parse_rating_record(fixture_text("luxshare_baseline_rating.json"), "baseline")


@pytest.fixture(scope="session")
def luxshare_recomputed():
    return parse_rating_record(fixture_text("luxshare_recomputed_rating.json"), "stride")


@pytest.fixture(scope="session")
def luxshare_annotations():
    return parse_annotations(fixture_text("luxshare_annotations.json"))
