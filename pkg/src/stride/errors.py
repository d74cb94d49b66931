"""Error types shared across the package.

Two failure families matter to callers: malformed or contract-violating
input documents, and computations that cannot proceed on otherwise
well-formed data.  The CLI maps them to distinct exit codes.
"""

from __future__ import annotations


class StrideError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(StrideError):
    """Input document is malformed or violates a declared invariant."""


class ComputationError(StrideError):
    """A score or sampling operation cannot be evaluated on the given data."""


class StoreError(StrideError):
    """Run store lookup or integrity failure."""
