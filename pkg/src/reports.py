"""Structured records of computed quantities and their JSON/CSV forms."""

import csv
import io
import json
import math
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import HypergraphFormatError


def format_rational(value: Fraction | int) -> str:
    """Render as "num/den" (denominator always printed)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Inverse of format_rational; plain integers are accepted too."""
    if isinstance(text, Fraction | int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise HypergraphFormatError(f"not a rational: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise HypergraphFormatError(f"not a rational: {text!r}") from e


@dataclass(frozen=True)
class BoundReport:
    """One computed quantity with its provenance."""

    name: str
    value: Fraction
    formula: str
    n: int | None = None
    witness: Any = None
    status: str = "exact"

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "value": format_rational(self.value),
            "n": self.n,
            "formula": self.formula,
            "witness": self.witness,
            "status": self.status,
        }

    @property
    def ceiling(self) -> int:
        return math.ceil(self.value)


CSV_FIELDS = ["name", "value", "n", "formula", "witness", "status"]


def reports_to_json(
    reports: Iterable[BoundReport],
    header: dict[str, Any] | None = None,
    key: str = "reports",
) -> str:
    """The reports under ``key``, next to the header fields."""
    payload: dict[str, Any] = jsonable(dict(header or {}))
    payload[key] = [jsonable(r) for r in reports]
    return json.dumps(payload, indent=2, sort_keys=True)


def reports_to_csv(reports: Iterable[BoundReport]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for report in reports:
        row = report.to_dict()
        witness = row["witness"]
        row["witness"] = json.dumps(witness) if witness is not None else ""
        writer.writerow(row)
    return buffer.getvalue()


def rows_to_csv(rows: list[dict[str, Any]]) -> str:
    """Generic table rows to CSV, column order taken from the first row."""
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(
            {
                k: format_rational(v) if isinstance(v, Fraction) else v
                for k, v in row.items()
            }
        )
    return buffer.getvalue()


def jsonable(value: Any) -> Any:
    """Recursively turn Fractions into "num/den" strings for json.dumps."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return jsonable(value.to_dict())
    return value
