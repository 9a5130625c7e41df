"""Vision-based safety monitoring.

Pauses the robot as soon as any confidently detected human keypoint lies
inside the robot's motion range (an axis-aligned rectangle in image pixels)
and resumes once every confident keypoint is seen outside it again.

    state = VsmState()
    state, verdict = vsm_step(state, frame, cfg)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import NonMonotonicTimestamp
from .verdict import MonitorState, MonitorVerdict, PauseCause

Point = tuple[float, float]

# absorbs float error in timestamps derived from tick counts
_DWELL_SLACK = 1e-9


@dataclass(frozen=True)
class Keypoint:
    id: int
    pos: Point
    confidence: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"keypoint confidence {self.confidence!r} outside [0, 1]")
        if not all(math.isfinite(c) for c in self.pos):
            raise ValueError(f"keypoint position {self.pos!r} is not finite")


@dataclass(frozen=True)
class KeypointFrame:
    t: float
    keypoints: tuple[Keypoint, ...] = ()

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("frame timestamp must be non-negative")
        object.__setattr__(self, "keypoints", tuple(self.keypoints))
        ids = [k.id for k in self.keypoints]
        if len(ids) != len(set(ids)):
            raise ValueError("keypoint ids must be unique within a frame")

    def confident(self, min_confidence: float) -> list[Keypoint]:
        return [k for k in self.keypoints if k.confidence >= min_confidence]


@dataclass(frozen=True)
class MotionRange:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(f"degenerate motion range {self!r}")


@dataclass(frozen=True)
class VsmConfig:
    range: MotionRange
    min_confidence: float = 0.3
    resume_dwell: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError("min_confidence must lie in [0, 1]")
        if self.resume_dwell < 0:
            raise ValueError("resume_dwell must be >= 0")


@dataclass(frozen=True)
class VsmState:
    verdict: MonitorVerdict = field(default_factory=MonitorVerdict)
    last_t: float | None = None
    # start of the current all-clear stretch while paused
    clear_since: float | None = None


def point_in_range(p: Sequence[float], r: MotionRange) -> bool:
    """Boundary-inclusive containment test."""
    x, y = p[0], p[1]
    return r.x_min <= x <= r.x_max and r.y_min <= y <= r.y_max


def vsm_step(state: VsmState, frame: KeypointFrame, cfg: VsmConfig) -> tuple[VsmState, MonitorVerdict]:
    """Advance the monitor by one keypoint frame.

    Any confident keypoint inside the range pauses immediately. Resuming
    needs at least one confident keypoint and none of them inside, held
    for ``cfg.resume_dwell`` seconds. Frames without confident keypoints
    never resume a paused monitor.
    """
    t = frame.t
    if state.last_t is not None and t <= state.last_t:
        raise NonMonotonicTimestamp(t, state.last_t)

    confident = frame.confident(cfg.min_confidence)
    inside = any(point_in_range(k.pos, cfg.range) for k in confident)
    verdict = state.verdict

    if verdict.state is MonitorState.RUNNING:
        if inside:
            verdict = MonitorVerdict.paused_by(PauseCause.HUMAN_IN_RANGE, since=t)
        else:
            verdict = replace(verdict, t=t)
        return VsmState(verdict, t, None), verdict

    if inside or not confident:
        verdict = replace(verdict, t=t)
        return VsmState(verdict, t, None), verdict

    clear_since = t if state.clear_since is None else state.clear_since
    if t - clear_since >= cfg.resume_dwell - _DWELL_SLACK:
        verdict = MonitorVerdict.running(since=t, t=t)
        # keep the stretch start on the resuming step for latency bookkeeping
        return VsmState(verdict, t, clear_since), verdict
    verdict = replace(verdict, t=t)
    return VsmState(verdict, t, clear_since), verdict


class VisionMonitor:
    """Stateful wrapper around :func:`vsm_step`."""

    def __init__(self, cfg: VsmConfig, state: VsmState | None = None) -> None:
        self.cfg = cfg
        self.state = state or VsmState()

    @property
    def verdict(self) -> MonitorVerdict:
        return self.state.verdict

    @property
    def clear_since(self) -> float | None:
        return self.state.clear_since

    def step(self, frame: KeypointFrame) -> MonitorVerdict:
        self.state, verdict = vsm_step(self.state, frame, self.cfg)
        return verdict

    def run(self, frames: Iterable[KeypointFrame]) -> list[MonitorVerdict]:
        return [self.step(f) for f in frames]
