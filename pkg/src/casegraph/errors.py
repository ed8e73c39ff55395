"""Exception hierarchy for the casegraph engine.

Every engine error maps to exactly one HTTP status in the service layer;
the class name doubles as the machine-readable error code on the wire.
"""


class CasegraphError(Exception):
    """Base class for all engine errors."""

    http_status = 400

    @property
    def code(self) -> str:
        return type(self).__name__


# --- model / credibility ---

class CredibilityViolation(CasegraphError):
    pass


class DraftClosed(CasegraphError):
    http_status = 409


class UnknownObject(CasegraphError):
    http_status = 404


class AttributeLocked(CasegraphError):
    http_status = 403


class NotAuthor(CasegraphError):
    http_status = 403


class WrongLevel(CasegraphError):
    pass


class AlreadyGrouped(CasegraphError):
    pass


class EmptySelection(CasegraphError):
    pass


class ConflictingFlags(CasegraphError):
    pass


# --- layout ---

class EmptyGraph(CasegraphError):
    pass


class AlreadyPlaced(CasegraphError):
    pass


# --- provenance store ---

class UnknownState(CasegraphError):
    http_status = 404


class UnknownDocument(CasegraphError):
    http_status = 404


class UnknownBranch(CasegraphError):
    http_status = 404


class DuplicateBranchName(CasegraphError):
    http_status = 409


class NotBranchOwner(CasegraphError):
    http_status = 403


class StaleDraft(CasegraphError):
    http_status = 409


# --- diff / merge ---

class CrossDocumentDiff(CasegraphError):
    pass


class UnresolvedConflict(CasegraphError):
    http_status = 409


class InvalidSelection(CasegraphError):
    pass


# --- ingestion ---

class SchemaViolation(CasegraphError):
    pass


class InvalidEvaluationCode(CasegraphError):
    pass


class DuplicateId(CasegraphError):
    pass


class UnknownDataset(CasegraphError):
    http_status = 404


class VersionMismatch(CasegraphError):
    http_status = 409


class NotStale(CasegraphError):
    pass


# --- reports ---

class UnflaggedState(CasegraphError):
    pass


class UnknownReport(CasegraphError):
    http_status = 404


class UnsupportedFormat(CasegraphError):
    pass


# --- service ---

class BindFailure(CasegraphError):
    http_status = 500


class CorruptStore(CasegraphError):
    """Raised/collected when a persisted file cannot be read back.

    Recovery is non-fatal: the offending file is skipped and reported,
    the rest of the store is served.
    """

    http_status = 500
