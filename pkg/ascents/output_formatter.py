"""
Machine-readable output for the command line.

Every result is wrapped in an OutputEnvelope (tool version, step set, command
echo, precision, payload). Numbers in the payload are tagged so that exact
values never pass through floating point:

- {"type": "int", "value": "42"}
- {"type": "rational", "num": "1", "den": "3"}
- {"type": "approx", "value": "0.79370052598409973737", "digits": 20}
"""

import csv
import io
from fractions import Fraction
from typing import Any

from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict

from ascents import __version__

TOOL_NAME = "lukas-ascents"


class OutputEnvelope(BaseModel):
    """Result of one CLI command."""

    model_config = ConfigDict(frozen=True)

    tool: str = TOOL_NAME
    version: str = __version__
    steps: str | None = None
    command: str
    digits: int | None = None
    payload: dict[str, Any]


def tag(value: Any, digits: int | None = None) -> Any:
    """
    Convert a result value into its JSON-safe tagged form.

    Lists, tuples and dicts are converted element by element; strings, bools,
    floats and None pass through unchanged.

    Examples:
        >>> tag(5)
        {'type': 'int', 'value': '5'}
        >>> tag(Fraction(6, 5))
        {'type': 'rational', 'num': '6', 'den': '5'}
    """
    if isinstance(value, bool) or value is None or isinstance(value, str | float):
        return value
    if isinstance(value, int):
        return {"type": "int", "value": str(value)}
    if isinstance(value, Fraction):
        return {"type": "rational", "num": str(value.numerator), "den": str(value.denominator)}
    if isinstance(value, mpf):
        shown = digits or mp.dps
        return {"type": "approx", "value": mp.nstr(value, shown), "digits": shown}
    if isinstance(value, dict):
        return {key: tag(item, digits) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [tag(item, digits) for item in value]
    raise TypeError(f"Cannot tag value of type {type(value).__name__}")


def plain(value: Any) -> str:
    """Render a tagged value as a single CSV cell."""
    if isinstance(value, dict) and "type" in value:
        if value["type"] == "rational":
            return f"{value['num']}/{value['den']}"
        return value["value"]
    if value is None:
        return ""
    return str(value)


def build_envelope(
    command: str,
    payload: dict[str, Any],
    steps: str | None = None,
    digits: int | None = None,
) -> OutputEnvelope:
    """Tag the payload and wrap it."""
    return OutputEnvelope(steps=steps, command=command, digits=digits, payload=tag(payload, digits))


def to_json(envelope: OutputEnvelope) -> str:
    """Pretty-printed JSON; parsing and re-serializing gives the same text."""
    return envelope.model_dump_json(indent=2)


def to_csv(envelope: OutputEnvelope) -> str:
    """
    CSV with a header row.

    Payloads with a "rows" list become one line per row (columns from the
    first row); any other payload becomes key,value lines.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    rows = envelope.payload.get("rows")

    if isinstance(rows, list):
        columns = list(rows[0]) if rows else []
        writer.writerow(columns)
        for row in rows:
            writer.writerow([plain(row.get(column)) for column in columns])
    else:
        writer.writerow(["key", "value"])
        for key, value in envelope.payload.items():
            if isinstance(value, list):
                value = ",".join(plain(item) for item in value)
            else:
                value = plain(value)
            writer.writerow([key, value])

    return buffer.getvalue()


def render(envelope: OutputEnvelope, output_format: str) -> str:
    """Render as "json" or "csv"."""
    if output_format == "csv":
        return to_csv(envelope)
    return to_json(envelope)
