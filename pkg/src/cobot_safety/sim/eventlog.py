"""Line-delimited event log.

One record per line::

    <t> <Kind> <payload-json>

``t`` is written with ``repr`` (shortest round-trip float) and the payload is
compact JSON whose keys keep the order the producer wrote them in, so
``loads(dumps(records)) == records`` and re-serialising is byte-identical.
Non-finite floats use JSON's ``Infinity``/``NaN`` extension.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

from ..errors import MalformedLog

LOG_FORMAT = "cobot-safety-log"
LOG_VERSION = 1
RNG_NAME = "numpy.random.PCG64+Generator.standard_normal"

KINDS = (
    "Header",
    "Frame",
    "Torque",
    "Wrench",
    "Verdict",
    "Intent",
    "Directive",
    "Command",
    "Contact",
    "Metric",
)


@dataclass(frozen=True)
class EventRecord:
    t: float
    kind: str
    payload: dict[str, Any]

    def to_line(self) -> str:
        body = json.dumps(self.payload, separators=(",", ":"), ensure_ascii=True)
        return f"{float(self.t)!r} {self.kind} {body}"

    @classmethod
    def from_line(cls, line: str, lineno: int = 0) -> EventRecord:
        try:
            t_text, kind, body = line.split(" ", 2)
            t = float(t_text)
            payload = json.loads(body)
        except ValueError as exc:
            raise MalformedLog(f"line {lineno}: {exc}") from exc
        if kind not in KINDS:
            raise MalformedLog(f"line {lineno}: unknown record kind {kind!r}")
        if not isinstance(payload, dict):
            raise MalformedLog(f"line {lineno}: payload must be an object")
        if not math.isfinite(t):
            raise MalformedLog(f"line {lineno}: non-finite timestamp")
        return cls(t, kind, payload)


def dumps(records: Iterable[EventRecord]) -> str:
    return "".join(r.to_line() + "\n" for r in records)


def loads(text: str) -> list[EventRecord]:
    records = []
    last_t = -math.inf
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line:
            continue
        rec = EventRecord.from_line(line, lineno)
        if rec.t < last_t:
            raise MalformedLog(f"line {lineno}: time goes backwards ({rec.t} < {last_t})")
        last_t = rec.t
        records.append(rec)
    if not records or records[0].kind != "Header":
        raise MalformedLog("log must start with a Header record")
    header = records[0].payload
    if header.get("format") != LOG_FORMAT or header.get("version") != LOG_VERSION:
        raise MalformedLog(f"unsupported log format {header.get('format')!r} v{header.get('version')!r}")
    return records


def write_log(records: Iterable[EventRecord], path: str | Path) -> Path:
    path = Path(path)
    # newline="" keeps "\n" on every platform so files compare byte for byte
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(dumps(records))
    return path


def read_log(path: str | Path) -> list[EventRecord]:
    with open(path, encoding="ascii", newline="") as fh:
        return loads(fh.read())


def header(records: list[EventRecord]) -> dict[str, Any]:
    if not records or records[0].kind != "Header":
        raise MalformedLog("log must start with a Header record")
    return records[0].payload
