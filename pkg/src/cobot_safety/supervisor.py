"""Arbitration of monitor verdicts and intention into one actuation directive.

Priority: contact pause > vision pause > interaction mode. Any pause halts;
otherwise coexistence tracks the most likely goal with the potential field
and cooperation follows the human through admittance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import StaleInput
from .intention import IntentEstimate, InteractionMode
from .motion import CommandSource, VelocityCommand
from .vsm import KeypointFrame


class Action(enum.Enum):
    HALT_ALL = "HaltAll"
    APF_TRACK = "ApfTrack"
    ADMITTANCE_FOLLOW = "AdmittanceFollow"


@dataclass(frozen=True)
class Directive:
    t: float
    action: Action
    goal: int | None = None
    cause: str = ""


class ContactKind(enum.Enum):
    EMERGENT = "Emergent"
    NON_CRITICAL = "NonCritical"


@dataclass(frozen=True)
class ContactClass:
    kind: ContactKind
    human_distance: float  # m; inf when no confident keypoint was seen
    vision_age: float  # s


@dataclass(frozen=True)
class FusionConfig:
    r_h: float = 0.3
    max_vision_age: float = 0.2
    min_confidence: float = 0.3


def arbitrate(
    vsm,
    csm,
    est: IntentEstimate,
    *,
    max_skew: float = 0.01,
    contact: ContactClass | None = None,
    guidance_force: float | None = None,
    guidance_limit: float | None = None,
) -> Directive:
    """Combine the latest monitor snapshots and intent into a directive.

    ``max_skew`` bounds the spread of the inputs' timestamps. The optional
    contact arguments implement the cooperation exception: while the human
    guides the robot (mode CO, vision clear), a contact pause classified
    NonCritical under a guidance force no larger than ``guidance_limit`` is
    not treated as a halt. Without them every pause halts.
    """
    stamps = (vsm.t, csm.t, est.t)
    skew = max(stamps) - min(stamps)
    if skew > max_skew + 1e-9:
        raise StaleInput(f"input timestamps {stamps} span {skew:.6f} s > {max_skew} s")
    t = max(stamps)

    if csm.paused:
        if (
            est.mode is InteractionMode.CO
            and not vsm.paused
            and contact is not None
            and contact.kind is ContactKind.NON_CRITICAL
            and guidance_force is not None
            and guidance_limit is not None
            and guidance_force <= guidance_limit
        ):
            return Directive(t, Action.ADMITTANCE_FOLLOW, None, "CO:NonCriticalContact")
        return Directive(t, Action.HALT_ALL, None, csm.cause.value)
    if vsm.paused:
        return Directive(t, Action.HALT_ALL, None, vsm.cause.value)
    if est.mode is InteractionMode.CO:
        return Directive(t, Action.ADMITTANCE_FOLLOW, None, "CO")
    return Directive(t, Action.APF_TRACK, est.best_goal, "CE")


def gate_command(d: Directive, cmd: VelocityCommand) -> VelocityCommand:
    if d.action is Action.HALT_ALL:
        return VelocityCommand(cmd.t, (0.0, 0.0), CommandSource.HALT)
    return cmd


def fuse_contact(
    contact_t: float,
    latest_frame: KeypointFrame | None,
    robot_pos,
    cfg: FusionConfig = FusionConfig(),
    unproject=None,
) -> ContactClass:
    """Classify a detected contact using the most recent vision frame.

    ``unproject`` maps keypoint pixel positions to workspace metres (identity
    when omitted). Stale or missing vision fails safe to Emergent.
    """
    if latest_frame is None:
        return ContactClass(ContactKind.EMERGENT, math.inf, math.inf)
    age = contact_t - latest_frame.t
    distances = []
    for k in latest_frame.confident(cfg.min_confidence):
        x, y = unproject(k.pos) if unproject is not None else k.pos
        distances.append(math.hypot(x - robot_pos[0], y - robot_pos[1]))
    nearest = min(distances, default=math.inf)
    if age > cfg.max_vision_age or nearest <= cfg.r_h:
        return ContactClass(ContactKind.EMERGENT, nearest, age)
    return ContactClass(ContactKind.NON_CRITICAL, nearest, age)
