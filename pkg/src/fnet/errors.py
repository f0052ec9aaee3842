"""Error types shared across the engine.

Every error carries a stable machine-readable ``code`` so the command line
and the HTTP service can report failures uniformly.  The set of codes is
closed and documented in the README.
"""

from __future__ import annotations


class FnetError(Exception):
    """Base class for all engine errors."""

    code = "error"

    def __init__(self, message: str, *, detail: object = None):
        super().__init__(message)
        self.detail = detail

    @property
    def message(self) -> str:
        return str(self.args[0]) if self.args else self.code

    def to_document(self) -> dict:
        doc: dict = {"code": self.code, "message": self.message}
        if self.detail is not None:
            doc["detail"] = self.detail
        return doc


class EmptyLabelError(FnetError):
    code = "empty-label"


# ---------------------------------------------------------------------------
# comparison errors: raised when two descriptions cannot be compared at all
# ---------------------------------------------------------------------------


class ComparisonError(FnetError):
    """A pair of descriptions admits no similarity score."""


class BothEmptyError(ComparisonError):
    code = "both-empty"


class NoPairedValuesError(ComparisonError):
    code = "no-paired-values"


class NoPairedAttributesError(ComparisonError):
    code = "no-paired-attributes"


class NoPairedFacetsError(ComparisonError):
    code = "no-paired-facets"


class KindMismatchError(ComparisonError):
    code = "kind-mismatch"


# ---------------------------------------------------------------------------
# lookup and partition errors
# ---------------------------------------------------------------------------


class UnknownEntityError(FnetError):
    code = "unknown-entity"


class EmptyKindError(FnetError):
    code = "empty-kind"


class UnknownPivotError(FnetError):
    code = "unknown-pivot"


class SchemaConflictError(FnetError):
    """The same attribute name is simple in one entity and composite in another."""

    code = "attribute-kind-conflict"


# ---------------------------------------------------------------------------
# session errors
# ---------------------------------------------------------------------------


class FingerprintMismatchError(FnetError):
    code = "fingerprint-mismatch"


class EmptyPartitionError(FnetError):
    code = "empty-partition"


class QueryKindMismatchError(FnetError):
    code = "query-kind-mismatch"


class SessionNotActiveError(FnetError):
    code = "session-not-active"


class NoCurrentCandidateError(FnetError):
    code = "no-current-candidate"


# ---------------------------------------------------------------------------
# persistence errors
# ---------------------------------------------------------------------------


class ParseError(FnetError):
    code = "parse-error"


class ValidationError(FnetError):
    """Raised when a document fails validation; ``detail`` holds the report."""

    code = "validation-failed"
