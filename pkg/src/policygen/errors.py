"""Exception hierarchy shared across the package.

Every public error derives from PolicygenError and carries a stable
machine code (used verbatim by the HTTP service and the CLI).
"""

from __future__ import annotations


class PolicygenError(Exception):
    """Base class for all errors raised by this package."""

    code = "internal_error"


class LibraryError(PolicygenError):
    """Clause library document failed schema or integrity validation."""

    code = "invalid_library"


class PlaceholderError(PolicygenError):
    """Text contains a malformed placeholder token."""

    code = "malformed_placeholder"


class UnresolvedPlaceholderError(PolicygenError):
    """Strict substitution found placeholders with no value."""

    code = "unresolved_placeholder"

    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__("unresolved placeholder " + ", ".join(self.names))


class BankError(PolicygenError):
    """Question bank failed schema or flow-graph validation."""

    code = "invalid_bank"

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(str(i) for i in self.issues)
        super().__init__(f"invalid question bank: {lines}")


class AnswerError(PolicygenError):
    """Submitted value does not match the question's shape."""

    code = "invalid_answer"


class SessionStateError(PolicygenError):
    """Operation not legal in the session's current state."""

    code = "session_state"


class SnapshotError(PolicygenError):
    """Persisted session snapshot is corrupt or inconsistent."""

    code = "corrupt_snapshot"


class SlotError(PolicygenError):
    """Template slot notation string could not be parsed."""

    code = "invalid_slot"


class TemplateError(PolicygenError):
    """Policy template failed validation."""

    code = "invalid_template"


class GenerationError(PolicygenError):
    """Policy document could not be produced from the given inputs."""

    code = "generation_failed"


class EvaluationError(PolicygenError):
    """Evaluation input (text, presence, criteria, checklist) is invalid."""

    code = "invalid_evaluation_input"


class StoreError(PolicygenError):
    """Session store failure (unknown id, corrupt file, unwritable dir)."""

    code = "storage_failure"

    def __init__(self, message, code=None):
        if code is not None:
            self.code = code
        super().__init__(message)
