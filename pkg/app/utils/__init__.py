import csv
import logging
import os
from datetime import datetime
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Iterable, List, Sequence

import pytz

from app.config import get_timezone
from app.models import ParamsError, to_fraction

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
# SplitMix64 increment and finalizer multipliers
SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
SPLITMIX_MUL1 = 0xBF58476D1CE4E5B9
SPLITMIX_MUL2 = 0x94D049BB133111EB
DECIMAL_PLACES = 6


def parse_rational(text) -> Fraction:
    """Parse '7/20', '0.35' or '1' exactly.

    Raises:
        ParamsError: if the text is not a finite rational
    """
    if isinstance(text, Fraction):
        return text
    value = str(text).strip()
    if not value:
        raise ParamsError("Empty rational value")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ParamsError(f"{text!r} is not a rational number")


def parse_rational_list(text: str) -> List[Fraction]:
    return [parse_rational(part) for part in str(text).split(",") if part.strip()]


def parse_range(text: str) -> tuple:
    """Parse 'start:stop' into two rationals."""
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ParamsError(f"Range must look like 'start:stop', got {text!r}")
    return parse_rational(parts[0]), parse_rational(parts[1])


def rational_range(start: Fraction, stop: Fraction, step: Fraction) -> List[Fraction]:
    """Inclusive arithmetic progression start, start+step, ..., <= stop."""
    start, stop, step = to_fraction(start), to_fraction(stop), to_fraction(step)
    if step <= 0:
        raise ParamsError(f"Grid step must be positive, got {step}")
    if stop < start:
        raise ParamsError(f"Range end {stop} lies below its start {start}")
    count = int((stop - start) / step)
    return [start + k * step for k in range(count + 1)]


def format_rational(value: Fraction) -> str:
    """Exact 'p/q' (or 'p' for integers)."""
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, places: int = DECIMAL_PLACES) -> str:
    """Fixed-point rendering of an exact rational, rounded half to even."""
    value = to_fraction(value)
    with localcontext() as ctx:
        ctx.prec = 60
        quotient = Decimal(value.numerator) / Decimal(value.denominator)
        return str(quotient.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def format_grid_value(value: Fraction) -> str:
    """Grid coordinates: shortest exact decimal when one exists, else 'p/q'."""
    value = to_fraction(value)
    denominator = value.denominator
    while denominator % 2 == 0:
        denominator //= 2
    while denominator % 5 == 0:
        denominator //= 5
    if denominator != 1:
        return format_rational(value)
    text = format_decimal(value, 12).rstrip("0").rstrip(".")
    return text if text not in ("", "-0") else "0"


def _splitmix64(state: int) -> int:
    z = (state + SPLITMIX_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * SPLITMIX_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * SPLITMIX_MUL2) & MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed: int, cell_index: int, rep_index: int) -> int:
    """Per-run 64-bit seed from (master seed, grid cell, repetition) via chained SplitMix64."""
    state = _splitmix64(master_seed & MASK64)
    state = _splitmix64(state ^ (cell_index & MASK64))
    return _splitmix64(state ^ (rep_index & MASK64))


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    """Write a UTF-8, LF-terminated CSV file with a header row.

    Returns:
        int: number of data rows written
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            count += 1
    logger.info(f"Wrote {count} rows to {path}")
    return count


def get_timezone_timestamp() -> datetime:
    """Get current timestamp in configured timezone.

    Returns:
        datetime: Current timestamp in the configured timezone

    Note:
        Supports both named timezones (e.g., 'America/Chicago') and UTC offsets (e.g., 'UTC-5').
        Falls back to UTC if timezone configuration is invalid.
    """
    timezone_str = get_timezone()
    try:
        if timezone_str.startswith("UTC") and len(timezone_str) > 3:
            offset = int(timezone_str[3:])
            tz = pytz.FixedOffset(offset * 60)
        else:
            tz = pytz.timezone(timezone_str)
        return datetime.now(tz)
    except Exception:
        return datetime.now(pytz.UTC)
