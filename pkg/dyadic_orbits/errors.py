"""Error types raised by the engine.

Every error carries a stable ``code`` so reports and the CLI can surface it
as structured JSON without parsing messages.
"""

from typing import Any, Dict, List, Optional


class OrbitError(Exception):
    """Base class for all engine errors."""

    code = "OrbitError"

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "message": str(self)}


class SpecSyntaxError(OrbitError):
    """Stream DSL text could not be parsed."""

    code = "SyntaxError"

    def __init__(self, message: str, position: int, expected: Optional[List[str]] = None):
        self.position = position
        self.expected = list(expected or [])
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload["position"] = self.position
        payload["expected"] = self.expected
        return payload


class UnknownKind(OrbitError):
    code = "UnknownKind"


class InvalidSpec(OrbitError):
    """A stream was requested for a spec that does not denote a point of Σ."""

    code = "InvalidSpec"

    def __init__(self, issues: List[str]):
        self.issues = issues
        super().__init__("; ".join(issues))


class GuardExceeded(OrbitError):
    """A run of equal digits grew past the guard without being declared."""

    code = "GuardExceeded"

    def __init__(self, digit: int, run_length: int, guard: int, position: int):
        self.digit = digit
        self.run_length = run_length
        self.guard = guard
        self.position = position
        super().__init__(
            f"run of {run_length} consecutive {digit}s first exceeds guard {guard} "
            f"at position {position}"
        )


class DigitSourceError(OrbitError):
    """A raw digit file could not be read or holds characters other than 0/1."""

    code = "IoError"


class DigitsExhausted(OrbitError):
    """A finite digit source ended before the requested index."""

    code = "DigitsExhausted"


class OutOfRange(OrbitError):
    """Index beyond the decomposed range; more digits must be materialized."""

    code = "OutOfRange"


class OverflowBudget(OrbitError):
    """A single orbit term exceeds the configured magnitude bit budget."""

    code = "OverflowBudget"


class InsufficientDigits(OrbitError):
    code = "InsufficientDigits"


class MismatchedCheckpoints(OrbitError):
    code = "MismatchedCheckpoints"
