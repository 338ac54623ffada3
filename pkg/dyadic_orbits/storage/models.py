"""Pydantic models for the orbit engine."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StreamKind:
    RATIONAL = "rational"
    CHAMPERNOWNE = "champernowne"
    BLOCK_CYCLE = "block_cycle"
    BLOCK_FAMILY = "block_family"
    RANDOM_BLOCKS = "random_blocks"
    RAW_DIGITS = "raw_digits"


class IssueCode:
    BINARY_RATIONAL_DENOMINATOR = "BinaryRationalDenominator"
    NUMERATOR_OUT_OF_RANGE = "NumeratorOutOfRange"
    ZERO_BLOCK_LENGTH = "ZeroBlockLength"
    NEGATIVE_LEADING_RUN = "NegativeLeadingRun"
    EMPTY_CYCLE = "EmptyCycle"
    BAD_LMAX = "BadLmax"
    BAD_SEED = "BadSeed"
    MISSING_FILE = "MissingFile"
    MISSING_PARAMETER = "MissingParameter"


class ScheduleKind:
    LOG = "log"
    BLOCKS = "blocks"
    ALL = "all"


class RegionTag:
    K0 = "K0"
    J = "J"
    K = "K"


# Stream spec models
class StreamSpec(BaseModel):
    """Normalized description of a digit stream.

    Only the fields belonging to ``kind`` are populated; the rest keep their
    defaults so that two specs compare equal iff they denote the same stream.
    """

    model_config = ConfigDict(frozen=True)

    kind: str
    numerator: Optional[int] = None
    denominator: Optional[int] = None
    pairs: Tuple[Tuple[int, int], ...] = ()
    m0: int = 0
    l_expr: Optional[str] = None
    m_expr: Optional[str] = None
    seed: Optional[int] = None
    lmax: Optional[int] = None
    path: Optional[str] = None


class ValidationIssue(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: str
    message: str


class ValidationReport(BaseModel):
    ok: bool
    issues: List[ValidationIssue] = Field(default_factory=list)

    @model_validator(mode="after")
    def _ok_matches_issues(self):
        if self.ok != (not self.issues):
            raise ValueError("ok must be true exactly when there are no issues")
        return self

    @classmethod
    def from_issues(cls, issues: List[ValidationIssue]) -> "ValidationReport":
        return cls(ok=not issues, issues=list(issues))


# Verification models
class CheckReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    check: str
    n_min: int = 1
    n_max: int
    violations: int = 0
    worst_margin: Optional[float] = None  # signed, negative = violation
    first_violation: Optional[int] = None
    passed: bool = Field(serialization_alias="pass")
    error: Optional[str] = None
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _pass_matches_violations(self):
        if self.error is None and self.passed != (self.violations == 0):
            raise ValueError("pass must be true exactly when there are no violations")
        return self


class RunConfig(BaseModel):
    spec: str
    p: str
    n_max: int = Field(ge=1)
    epsilon_bits: int = Field(default=40, ge=1)
    schedule: str = ScheduleKind.ALL
    out: Optional[Path] = None
    guard: Optional[int] = None
    bit_budget: Optional[int] = None
    include_initial: bool = False
    theorem3: bool = False
    theorem5: bool = False
    bound: Optional[str] = None

    @property
    def epsilon_text(self) -> str:
        return f"2^-{self.epsilon_bits}"


class RunReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    spec: str
    p: str
    n_max: int
    epsilon: str
    checks: List[CheckReport] = Field(default_factory=list)
    passed: bool = Field(serialization_alias="pass")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class AnalysisReport(BaseModel):
    """Checkpoint rows of one analyze run; values are the CSV cell strings."""

    spec: str
    p: str
    n_max: int
    epsilon: str
    dual: bool = False
    rows: List[Dict[str, Optional[str]]] = Field(default_factory=list)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


class BlockRatios(BaseModel):
    j: int
    ratio_lm: str
    ratio_l: str
    ratio_m: str


class NormalityReport(BaseModel):
    spec: str
    n_max: int
    digit_frequencies: Dict[str, str]
    pattern_length: int
    pattern_counts: Dict[str, int]
    trend: List[Tuple[int, str]] = Field(default_factory=list)
    trend_decreasing: bool = True
    diagnostics: List[BlockRatios] = Field(default_factory=list)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


class SweepReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    runs: List[RunReport] = Field(default_factory=list)
    passed: bool = Field(serialization_alias="pass")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)
