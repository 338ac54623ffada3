"""Parser, renderer and validator for the digit-stream DSL.

Grammar (one line)::

    rational:<int>/<int>
    champernowne
    blocks:cycle=[(l1,m1),(l2,m2),...](;m0=<int>)?
    blocks:l=<expr>;m=<expr>(;m0=<int>)?
    random:seed=<u64>(;lmax=<int>)?
    digits:file=<path>

Block-family expressions are built from integer constants, ``j``, ``+``,
``*``, ``^`` (right associative), postfix ``!``, ``min(a,b)``, ``max(a,b)``
and parentheses.
"""

import logging
import math
from functools import lru_cache
from pathlib import Path
from typing import Callable, List, Optional, Tuple

from ..config import config
from ..errors import OverflowBudget, SpecSyntaxError, UnknownKind
from ..storage.models import (
    IssueCode,
    StreamKind,
    StreamSpec,
    ValidationIssue,
    ValidationReport,
)

logger = logging.getLogger(__name__)

U64_LIMIT = 2**64
FACTORIAL_CAP = 10_000
POWER_BIT_CAP = 10_000_000

_KIND_WORDS = ("rational", "champernowne", "blocks", "random", "digits")

# Expression nodes are tuples: ("int", v), ("j",), (op, a[, b]).
Expr = Tuple

_LEVEL = {"add": 1, "mul": 2, "pow": 3, "fact": 4}


class _Parser:
    """Recursive-descent parser over a single DSL line."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    # -- low level -------------------------------------------------------
    def error(self, message: str, expected: List[str]) -> SpecSyntaxError:
        return SpecSyntaxError(message, self.pos, expected)

    def skip_space(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_space()
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        self.skip_space()
        return self.text.startswith(literal, self.pos)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str):
        if not self.accept(literal):
            found = self.text[self.pos:self.pos + 1] or "end of input"
            raise self.error(f"unexpected {found!r}", [repr(literal)])

    def word(self) -> str:
        self.skip_space()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def integer(self) -> int:
        self.skip_space()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer", ["<int>"])
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            raise self.error("floating-point literals are not accepted", ["<int>"])
        return int(self.text[start:self.pos])

    def finish(self):
        if not self.at_end():
            raise self.error(f"trailing input {self.text[self.pos:]!r}", ["end of input"])

    # -- expressions -----------------------------------------------------
    def expr(self) -> Expr:
        node = self.term()
        while self.accept("+"):
            node = ("add", node, self.term())
        return node

    def term(self) -> Expr:
        node = self.power()
        while self.accept("*"):
            node = ("mul", node, self.power())
        return node

    def power(self) -> Expr:
        base = self.postfix()
        if self.accept("^"):
            return ("pow", base, self.power())
        return base

    def postfix(self) -> Expr:
        node = self.atom()
        while self.accept("!"):
            node = ("fact", node)
        return node

    def atom(self) -> Expr:
        self.skip_space()
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if self.pos < len(self.text) and self.text[self.pos].isdigit():
            return ("int", self.integer())
        start = self.pos
        name = self.word()
        if name == "j":
            return ("j",)
        if name in ("min", "max"):
            self.expect("(")
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(")")
            return (name, left, right)
        self.pos = start
        raise self.error("expected an expression", ["<int>", "'j'", "'('", "'min'", "'max'"])


def _level(node: Expr) -> int:
    return _LEVEL.get(node[0], 5)


def render_expr(node: Expr) -> str:
    """Canonical text for an expression; parsing it gives the same tree back."""

    def wrap(child: Expr, minimum: int) -> str:
        text = render_expr(child)
        return f"({text})" if _level(child) < minimum else text

    op = node[0]
    if op == "int":
        return str(node[1])
    if op == "j":
        return "j"
    if op == "add":
        return f"{wrap(node[1], 1)}+{wrap(node[2], 2)}"
    if op == "mul":
        return f"{wrap(node[1], 2)}*{wrap(node[2], 3)}"
    if op == "pow":
        return f"{wrap(node[1], 4)}^{wrap(node[2], 3)}"
    if op == "fact":
        return f"{wrap(node[1], 4)}!"
    return f"{op}({render_expr(node[1])},{render_expr(node[2])})"


def evaluate_expr(node: Expr, j: int) -> int:
    """Evaluate an expression tree at block index j.

    Raises:
        OverflowBudget: a factorial or power would be astronomically large.
    """
    op = node[0]
    if op == "int":
        return node[1]
    if op == "j":
        return j
    if op == "fact":
        value = evaluate_expr(node[1], j)
        if value > FACTORIAL_CAP:
            raise OverflowBudget(f"factorial of {value} exceeds the expression cap")
        return math.factorial(value)
    left = evaluate_expr(node[1], j)
    right = evaluate_expr(node[2], j)
    if op == "add":
        return left + right
    if op == "mul":
        return left * right
    if op == "pow":
        if left > 1 and right * left.bit_length() > POWER_BIT_CAP:
            raise OverflowBudget(f"{left}^{right} exceeds the expression cap")
        return left**right
    if op == "min":
        return min(left, right)
    return max(left, right)


def parse_expr(text: str) -> Expr:
    parser = _Parser(text)
    node = parser.expr()
    parser.finish()
    return node


@lru_cache(maxsize=256)
def compile_expr(text: str) -> Callable[[int], int]:
    """Return j -> value for a canonical expression string."""
    node = parse_expr(text)
    return lambda j: evaluate_expr(node, j)


# -- spec level ------------------------------------------------------------
def _parse_m0(parser: _Parser) -> int:
    if parser.accept(";"):
        parser.expect("m0")
        parser.expect("=")
        return parser.integer()
    return 0


def _parse_blocks(parser: _Parser) -> StreamSpec:
    start = parser.pos
    key = parser.word()
    if key == "cycle":
        parser.expect("=")
        parser.expect("[")
        pairs = []
        while True:
            parser.expect("(")
            length = parser.integer()
            parser.expect(",")
            ones = parser.integer()
            parser.expect(")")
            pairs.append((length, ones))
            if not parser.accept(","):
                break
        parser.expect("]")
        m0 = _parse_m0(parser)
        return StreamSpec(kind=StreamKind.BLOCK_CYCLE, pairs=tuple(pairs), m0=m0)
    if key == "l":
        parser.expect("=")
        l_node = parser.expr()
        parser.expect(";")
        parser.expect("m")
        parser.expect("=")
        m_node = parser.expr()
        m0 = _parse_m0(parser)
        return StreamSpec(
            kind=StreamKind.BLOCK_FAMILY,
            l_expr=render_expr(l_node),
            m_expr=render_expr(m_node),
            m0=m0,
        )
    parser.pos = start
    raise parser.error("unknown blocks form", ["'cycle='", "'l='"])


def parse_spec(text: str) -> StreamSpec:
    """Parse one line of the stream DSL into a normalized StreamSpec.

    Raises:
        SpecSyntaxError: malformed text, with position and expected tokens.
        UnknownKind: the leading word names no stream kind.
    """
    if not text or not text.strip():
        raise SpecSyntaxError("empty stream spec", 0, list(_KIND_WORDS))
    stripped = text.strip()
    if "\n" in stripped:
        raise SpecSyntaxError("stream specs are single-line", stripped.index("\n"), [])

    parser = _Parser(stripped)
    kind = parser.word()
    if kind not in _KIND_WORDS:
        raise UnknownKind(f"unknown stream kind {kind!r}; expected one of {', '.join(_KIND_WORDS)}")

    if kind == "champernowne":
        parser.finish()
        return StreamSpec(kind=StreamKind.CHAMPERNOWNE)

    parser.expect(":")
    if kind == "rational":
        numerator = parser.integer()
        parser.expect("/")
        denominator = parser.integer()
        parser.finish()
        if numerator > 0 and denominator > 0:
            common = math.gcd(numerator, denominator)
            numerator, denominator = numerator // common, denominator // common
        return StreamSpec(kind=StreamKind.RATIONAL, numerator=numerator, denominator=denominator)

    if kind == "blocks":
        spec = _parse_blocks(parser)
        parser.finish()
        return spec

    if kind == "random":
        parser.expect("seed")
        parser.expect("=")
        seed = parser.integer()
        lmax = config.RANDOM_LMAX
        if parser.accept(";"):
            parser.expect("lmax")
            parser.expect("=")
            lmax = parser.integer()
        parser.finish()
        return StreamSpec(kind=StreamKind.RANDOM_BLOCKS, seed=seed, lmax=lmax)

    # digits:file=<path>; the path runs to the end of the line.
    parser.expect("file")
    parser.expect("=")
    path = stripped[parser.pos:].strip()
    if not path:
        raise parser.error("missing file path", ["<path>"])
    return StreamSpec(kind=StreamKind.RAW_DIGITS, path=path)


def render_spec(spec: StreamSpec) -> str:
    """Canonical DSL text for a spec (parse_spec(render_spec(s)) == s)."""
    if spec.kind == StreamKind.RATIONAL:
        return f"rational:{spec.numerator}/{spec.denominator}"
    if spec.kind == StreamKind.CHAMPERNOWNE:
        return "champernowne"
    suffix = f";m0={spec.m0}" if spec.m0 else ""
    if spec.kind == StreamKind.BLOCK_CYCLE:
        pairs = ",".join(f"({length},{ones})" for length, ones in spec.pairs)
        return f"blocks:cycle=[{pairs}]{suffix}"
    if spec.kind == StreamKind.BLOCK_FAMILY:
        return f"blocks:l={spec.l_expr};m={spec.m_expr}{suffix}"
    if spec.kind == StreamKind.RANDOM_BLOCKS:
        return f"random:seed={spec.seed};lmax={spec.lmax}"
    if spec.kind == StreamKind.RAW_DIGITS:
        return f"digits:file={spec.path}"
    raise UnknownKind(f"unknown stream kind {spec.kind!r}")


def odd_part(n: int) -> int:
    return n >> ((n & -n).bit_length() - 1)


def _issue(code: str, message: str) -> ValidationIssue:
    return ValidationIssue(code=code, message=message)


def _validate_rational(spec: StreamSpec) -> List[ValidationIssue]:
    num, den = spec.numerator, spec.denominator
    if num is None or den is None:
        return [_issue(IssueCode.MISSING_PARAMETER, "rational needs numerator and denominator")]
    if not 0 < num < den:
        return [_issue(IssueCode.NUMERATOR_OUT_OF_RANGE, f"need 0 < {num} < {den}")]
    reduced = den // math.gcd(num, den)
    if odd_part(reduced) == 1:
        return [_issue(
            IssueCode.BINARY_RATIONAL_DENOMINATOR,
            f"{num}/{den} has denominator {reduced}, a power of two: a binary rational",
        )]
    return []


def _validate_lengths(pairs, m0: int) -> List[ValidationIssue]:
    issues = []
    if m0 < 0:
        issues.append(_issue(IssueCode.NEGATIVE_LEADING_RUN, f"m0 = {m0} must be >= 0"))
    for index, (length, ones) in enumerate(pairs, start=1):
        if length < 1 or ones < 1:
            issues.append(_issue(
                IssueCode.ZERO_BLOCK_LENGTH,
                f"block {index} has (l, m) = ({length}, {ones}); both must be >= 1",
            ))
    return issues


def _validate_family(spec: StreamSpec) -> List[ValidationIssue]:
    if spec.l_expr is None or spec.m_expr is None:
        return [_issue(IssueCode.MISSING_PARAMETER, "block family needs l and m expressions")]
    length_of = compile_expr(spec.l_expr)
    ones_of = compile_expr(spec.m_expr)
    issues = _validate_lengths([], spec.m0)
    for j in range(1, config.FAMILY_VALIDATION_DEPTH + 1):
        try:
            pair = (length_of(j), ones_of(j))
        except OverflowBudget:
            # Values past the cap are certainly >= 1.
            logger.debug(f"family expression exceeds cap at j={j}; stopping validation scan")
            break
        if pair[0] < 1 or pair[1] < 1:
            issues.append(_issue(
                IssueCode.ZERO_BLOCK_LENGTH,
                f"block {j} has (l, m) = {pair}; both must be >= 1",
            ))
            break
    return issues


def validate_spec(spec: StreamSpec) -> ValidationReport:
    """Check that a spec denotes a point of Σ by construction.

    Issues are data: nothing is raised for an invalid spec.
    """
    if spec.kind == StreamKind.RATIONAL:
        issues = _validate_rational(spec)
    elif spec.kind == StreamKind.CHAMPERNOWNE:
        issues = []
    elif spec.kind == StreamKind.BLOCK_CYCLE:
        issues = _validate_lengths(spec.pairs, spec.m0)
        if not spec.pairs:
            issues.append(_issue(IssueCode.EMPTY_CYCLE, "cycle needs at least one (l, m) pair"))
    elif spec.kind == StreamKind.BLOCK_FAMILY:
        issues = _validate_family(spec)
    elif spec.kind == StreamKind.RANDOM_BLOCKS:
        issues = []
        if spec.seed is None or not 0 <= spec.seed < U64_LIMIT:
            issues.append(_issue(IssueCode.BAD_SEED, f"seed {spec.seed} must fit in 64 bits"))
        if spec.lmax is None or spec.lmax < 1:
            issues.append(_issue(IssueCode.BAD_LMAX, f"lmax {spec.lmax} must be >= 1"))
    elif spec.kind == StreamKind.RAW_DIGITS:
        issues = []
        if not spec.path or not Path(spec.path).is_file():
            issues.append(_issue(IssueCode.MISSING_FILE, f"digit file {spec.path!r} not found"))
    else:
        raise UnknownKind(f"unknown stream kind {spec.kind!r}")
    return ValidationReport.from_issues(issues)
