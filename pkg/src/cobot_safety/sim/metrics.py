"""Safety metrics computed purely from an event log."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from ..errors import MalformedLog
from ..motion import GOAL_TOLERANCE
from .eventlog import EventRecord, header
from .scenario import CameraMap, unproject


@dataclass
class Metrics:
    min_separation: float = math.inf  # m; inf when robot and human never co-observed
    pause_count: int = 0
    resume_latencies: list[float] = field(default_factory=list)
    goal_reached: bool = False
    time_in_co: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


def compute_metrics(records: Sequence[EventRecord]) -> Metrics:
    """Recompute metrics from the records (existing Metric records are ignored).

    ``min_separation`` pairs every Command record's robot position with the
    confident keypoints of the latest Frame at or before it.
    """
    try:
        return _compute(records)
    except (KeyError, TypeError, IndexError) as exc:
        raise MalformedLog(f"cannot compute metrics: {exc!r}") from exc


def _compute(records: Sequence[EventRecord]) -> Metrics:
    scen = header(list(records[:1]))["scenario"]
    cam = CameraMap(float(scen["camera"]["scale"]), tuple(scen["camera"]["offset"]))
    min_conf = float(scen["vsm"]["min_confidence"])
    goals = [tuple(g) for g in scen["goals"]["goals"]]
    duration = float(scen["duration"])

    m = Metrics()
    kps: list[tuple[float, float]] = []
    mode, mode_t = "CE", 0.0
    for rec in records[1:]:
        p = rec.payload
        kind = rec.kind
        if kind == "Frame":
            kps = [unproject((x, y), cam) for _id, x, y, c in p["kps"] if c >= min_conf]
        elif kind == "Command":
            x, y = p["pos"]
            for hx, hy in kps:
                m.min_separation = min(m.min_separation, math.hypot(hx - x, hy - y))
            goal = p.get("goal")
            if goal is not None and not m.goal_reached:
                gx, gy = goals[goal - 1]
                m.goal_reached = math.hypot(gx - x, gy - y) <= GOAL_TOLERANCE
        elif kind == "Verdict":
            if p["state"] == "Paused":
                m.pause_count += 1
            elif p.get("dwell_start") is not None:
                m.resume_latencies.append(rec.t - p["dwell_start"])
        elif kind == "Intent":
            if mode == "CO":
                m.time_in_co += rec.t - mode_t
            mode, mode_t = p["mode"], rec.t
    if mode == "CO":
        m.time_in_co += max(0.0, duration - mode_t)
    return m


def metric_records(m: Metrics, t: float) -> list[EventRecord]:
    return [EventRecord(t, "Metric", {"name": k, "value": v}) for k, v in m.as_dict().items()]
