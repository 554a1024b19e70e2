"""Exception types shared across the engine.

Every failure mode that callers are expected to handle gets its own type;
generic ``ValueError``/``RuntimeError`` are reserved for programming errors.
"""


class EngineError(Exception):
    """Base class for all engine failures."""


class PreconditionError(EngineError):
    """An operation was called with inputs violating its stated preconditions."""


class DegenerateDirectionError(EngineError):
    """A direction vector required to be non-zero had (near-)zero length."""


class DegeneratePoseError(EngineError):
    """Neither the hip pair nor the shoulder pair defines a facing direction."""


class SchemaError(EngineError):
    """An input file violates its schema; carries the offending path or id."""

    def __init__(self, message: str, *, offender: str | None = None):
        super().__init__(message if offender is None else f"{message} (offender: {offender})")
        self.offender = offender


class MissingObjectError(EngineError):
    """A referenced object id does not exist in the scene."""


class UnknownActivityError(EngineError):
    """An activity name is not in the vocabulary; carries nearest entries."""

    def __init__(self, name: str, suggestions: list[str]):
        hint = f"; closest entries: {', '.join(suggestions)}" if suggestions else ""
        super().__init__(f"unknown activity {name!r}{hint}")
        self.name = name
        self.suggestions = suggestions


class NotGeneratableError(EngineError):
    """The requested sub-task is human-annotated; use the annotation UI flow."""


class ResponseParseError(EngineError):
    """An LLM response did not match the mandated format; carries the raw text."""

    def __init__(self, message: str, raw: str):
        super().__init__(f"{message}; raw text: {raw!r}")
        self.raw = raw


class JudgeFormatError(ResponseParseError):
    """A judge output did not contain a usable score token."""


class UndefinedCorrelationError(EngineError):
    """Pearson correlation is undefined for constant input."""


class LLMClientError(EngineError):
    """An LLM call failed after exhausting retries."""
