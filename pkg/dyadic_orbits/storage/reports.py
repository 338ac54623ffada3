"""CSV, JSON and digit-file emission."""

import csv
import io
import logging
import sys
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Union

from ..core.digits import DigitPrefix
from ..core.dyadic import DyadicInterval
from ..core.estimators import EstimatorTrace, Value, as_interval
from ..core.orbit import OrbitSumSeries
from .models import AnalysisReport

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "n", "region", "j", "q",
    "S_lo", "S_hi", "log2_S_lo", "log2_S_hi", "A_lo", "A_hi",
    "phi", "psi", "upsilon", "lambda",
    "log2_phi", "log2_psi", "log2_upsilon", "log2_lambda",
]

SIGNIFICANT_DIGITS = 18
LINEAR_LIMIT = 10**SIGNIFICANT_DIGITS
LOG_PREC = 64


def _plain(value: Decimal) -> str:
    text = format(value, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text or "0"


def fraction_text(value: Fraction) -> str:
    """Exact decimal when it terminates within 18 significant digits, else rounded to 18."""
    with localcontext() as ctx:
        ctx.prec = SIGNIFICANT_DIGITS
        ctx.rounding = ROUND_HALF_EVEN
        return _plain(Decimal(value.numerator) / Decimal(value.denominator))


def _fits(interval: DyadicInterval) -> bool:
    return interval.magnitude_bits() <= 59 and interval.hi_at_most(LINEAR_LIMIT - 1)


def interval_cells(interval: DyadicInterval) -> List[str]:
    """[lo, hi] as outward-rounded decimals, empty when too large for a linear column."""
    if not _fits(interval):
        return ["", ""]
    lo, hi = interval.to_decimal_bounds(SIGNIFICANT_DIGITS)
    return [_plain(lo), _plain(hi)]


def log2_cells(interval: DyadicInterval) -> List[str]:
    return interval_cells(interval.log2(LOG_PREC))


def value_cell(value: Value) -> str:
    """An estimator value: a Fraction rounded half-even to 18 significant digits, or the enclosure midpoint."""
    if isinstance(value, Fraction):
        return fraction_text(value) if value < LINEAR_LIMIT else ""
    if not _fits(value):
        return ""
    lo, hi = value.lo_fraction(), value.hi_fraction()
    return fraction_text((lo + hi) / 2)


def log2_value_cell(value: Value) -> str:
    enclosure = as_interval(value, 96).log2(LOG_PREC)
    return fraction_text((enclosure.lo_fraction() + enclosure.hi_fraction()) / 2)


def analysis_rows(series: OrbitSumSeries, trace: EstimatorTrace) -> List[Dict[str, Optional[str]]]:
    """One row per checkpoint, n strictly increasing."""
    rows = []
    for point, entry in zip(series.checkpoints, trace.entries):
        s_lo, s_hi = interval_cells(point.S)
        log_lo, log_hi = log2_cells(point.S)
        a_lo, a_hi = interval_cells(point.A)
        values = (entry.phi, entry.psi, entry.upsilon, entry.lam)
        cells = [str(point.n), entry.region.tag, str(entry.region.j), str(entry.region.q),
                 s_lo, s_hi, log_lo, log_hi, a_lo, a_hi]
        cells += [value_cell(value) for value in values]
        cells += [log2_value_cell(value) for value in values]
        rows.append(dict(zip(CSV_COLUMNS, cells)))
    return rows


def render_csv(rows: List[Dict[str, Optional[str]]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def dual_rows(series: OrbitSumSeries) -> List[Dict[str, Optional[str]]]:
    rows = []
    for point in series.checkpoints:
        s_lo, s_hi = interval_cells(point.S)
        a_lo, a_hi = interval_cells(point.A)
        rows.append({"n": str(point.n), "S_lo": s_lo, "S_hi": s_hi, "A_lo": a_lo, "A_hi": a_hi})
    return rows


def render_dual_csv(rows: List[Dict[str, Optional[str]]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=["n", "S_lo", "S_hi", "A_lo", "A_hi"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def render_analysis_json(report: AnalysisReport) -> str:
    return report.to_json() + "\n"


def digits_text(prefix: DigitPrefix) -> str:
    return prefix.text + "\n"


def write_output(text: str, out: Optional[Union[str, Path]] = None):
    """Write to out, or to stdout when out is None. One writer per path."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(text)} bytes to {path}")
