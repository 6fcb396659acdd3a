"""JSON and CSV formats for fields, ranges, schedules and trajectories.

Numbers travel as decimal or fraction strings so nothing goes through
binary floating point on the way in.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .game import Field, FieldRange
from .network import ParseError, format_rational, parse_rational
from .simulation import FieldSchedule, Trajectory


def _vector(values: Any, what: str, n: int | None) -> Field:
    if not isinstance(values, list):
        raise ParseError(f"{what} must be a list")
    try:
        h = tuple(parse_rational(v if isinstance(v, str) else _int_only(v)) for v in values)
    except ValueError as exc:
        raise ParseError(f"{what}: {exc}") from None
    if n is not None and len(h) != n:
        raise ParseError(f"{what} has length {len(h)}, expected {n}")
    return h


def _int_only(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"use a string for non-integer value {v!r}")
    return v


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def parse_field(text: str, n: int | None = None) -> Field:
    """``{"h": ["0", "-1", "1/2"]}``"""
    doc = _load(text)
    if not isinstance(doc, dict) or "h" not in doc:
        raise ParseError('field document needs an "h" key')
    return _vector(doc["h"], "h", n)


def parse_range(text: str, n: int | None = None) -> FieldRange:
    """``{"h_minus": [...], "h_plus": [...]}``"""
    doc = _load(text)
    return _range_from(doc, n)


def _range_from(doc: Any, n: int | None) -> FieldRange:
    if not isinstance(doc, dict) or "h_minus" not in doc or "h_plus" not in doc:
        raise ParseError('range document needs "h_minus" and "h_plus"')
    lo = _vector(doc["h_minus"], "h_minus", n)
    hi = _vector(doc["h_plus"], "h_plus", len(lo))
    try:
        return FieldRange(lo, hi)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_field(h: Field) -> str:
    return json.dumps({"h": [format_rational(v) for v in h]}) + "\n"


def format_range(r: FieldRange) -> str:
    return json.dumps(
        {"h_minus": [format_rational(v) for v in r.lower], "h_plus": [format_rational(v) for v in r.upper]}
    ) + "\n"


def parse_schedule(text: str, n: int | None = None, field_range: FieldRange | None = None) -> FieldSchedule:
    """Either a bare breakpoint list ``[{"t": "0", "h": [...]}, ...]`` or an object
    ``{"breakpoints": [...], "period": "10", "range": {...}}``.

    Breakpoint times must be strictly increasing.
    """
    doc = _load(text)
    period = None
    if isinstance(doc, dict):
        if "breakpoints" not in doc:
            raise ParseError('schedule object needs "breakpoints"')
        if "period" in doc and doc["period"] is not None:
            try:
                period = parse_rational(str(doc["period"]))
            except ValueError as exc:
                raise ParseError(f"period: {exc}") from None
        if "range" in doc and doc["range"] is not None:
            embedded = _range_from(doc["range"], n)
            if field_range is not None and embedded != field_range:
                raise ParseError("schedule range disagrees with the given range")
            field_range = embedded
        points = doc["breakpoints"]
    else:
        points = doc
    if not isinstance(points, list) or not points:
        raise ParseError("schedule needs a nonempty breakpoint list")
    bps = []
    for k, bp in enumerate(points):
        if not isinstance(bp, dict) or "t" not in bp or "h" not in bp:
            raise ParseError(f"breakpoint {k} needs keys t and h")
        try:
            t = parse_rational(str(bp["t"]) if not isinstance(bp["t"], str) else bp["t"])
        except ValueError as exc:
            raise ParseError(f"breakpoint {k}: {exc}") from None
        if t < 0:
            raise ParseError(f"breakpoint {k}: negative time")
        bps.append((t, _vector(bp["h"], f"breakpoint {k} field", n)))
    times = [t for t, _ in bps]
    if times != sorted(times):
        raise ParseError("breakpoint times must be increasing")
    try:
        return FieldSchedule(tuple(bps), period=period, range=field_range)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_schedule(s: FieldSchedule) -> str:
    points = [{"t": format_rational(t), "h": [format_rational(v) for v in h]} for t, h in s.breakpoints]
    if s.period is None and s.range is None:
        return json.dumps(points) + "\n"
    doc: dict[str, Any] = {"breakpoints": points}
    if s.period is not None:
        doc["period"] = format_rational(s.period)
    if s.range is not None:
        doc["range"] = json.loads(format_range(s.range))
    return json.dumps(doc) + "\n"


def export_trajectory(traj: Trajectory, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(traj.to_csv(), encoding="utf-8")
    return path


def read_trajectory_csv(text: str) -> list[dict[str, str]]:
    import csv
    import io

    return list(csv.DictReader(io.StringIO(text)))


