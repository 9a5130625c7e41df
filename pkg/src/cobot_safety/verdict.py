"""Output contract shared by the vision and contact monitors."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class MonitorState(enum.Enum):
    RUNNING = "Running"
    PAUSED = "Paused"


class PauseCause(enum.Enum):
    HUMAN_IN_RANGE = "HumanInRange"
    UNEXPECTED_CONTACT = "UnexpectedContact"


@dataclass(frozen=True)
class MonitorVerdict:
    """Snapshot of a monitor's decision.

    Attributes:
        state: Running or Paused.
        cause: Why the monitor paused; ``None`` exactly when Running.
        since: Time of the last state transition, seconds.
        t: Time of the observation that produced this snapshot, seconds.
    """

    state: MonitorState = MonitorState.RUNNING
    cause: PauseCause | None = None
    since: float = 0.0
    t: float = 0.0

    def __post_init__(self) -> None:
        if (self.cause is None) != (self.state is MonitorState.RUNNING):
            raise ValueError("cause must be None iff state is Running")

    @property
    def paused(self) -> bool:
        return self.state is MonitorState.PAUSED

    @classmethod
    def running(cls, since: float = 0.0, t: float = 0.0) -> MonitorVerdict:
        return cls(MonitorState.RUNNING, None, since, t)

    @classmethod
    def paused_by(cls, cause: PauseCause, since: float, t: float | None = None) -> MonitorVerdict:
        return cls(MonitorState.PAUSED, cause, since, since if t is None else t)
