"""Deterministic multirate closed-loop simulation.

All timing is done on an integer base tick whose rate is the least common
multiple of the vision, torque and control rates (1500 Hz for the default
30/500/100 Hz), so sensor and control instants never drift. Within a base
tick the order is torque -> vision -> control.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

import numpy as np

from ..csm import ContactMonitor, TorqueSample
from ..errors import InvalidScenario
from ..intention import IntentionTracker, InteractionMode, Wrench
from ..motion import RobotState, admittance_step, apf_step
from ..supervisor import Action, ContactClass, arbitrate, fuse_contact, gate_command
from ..verdict import MonitorVerdict
from ..vsm import Keypoint, KeypointFrame, VisionMonitor
from .eventlog import LOG_FORMAT, LOG_VERSION, RNG_NAME, EventRecord
from .metrics import compute_metrics, metric_records
from .scenario import ContactEvent, Scenario, project, sample_human, unproject

log = logging.getLogger(__name__)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def synth_torque(
    t: float,
    contacts: tuple[ContactEvent, ...],
    noise_sigma: float,
    rng: np.random.Generator,
    num_joints: int = 6,
    monitored_joints: tuple[int, ...] = (0, 1),
) -> TorqueSample:
    """Zero baseline + Gaussian noise on every joint + rectangular contact pulses."""
    if noise_sigma > 0:
        torques = [float(v) for v in rng.standard_normal(num_joints) * noise_sigma]
    else:
        torques = [0.0] * num_joints
    for c in contacts:
        if c.active(t):
            for j, amp in zip(monitored_joints, c.amplitude):
                torques[j] += amp
    return TorqueSample(t, tuple(torques))


def build_frame(scenario: Scenario, t: float) -> KeypointFrame:
    human = scenario.human
    if not human.present:
        return KeypointFrame(t, ())
    conf = 0.0 if human.in_dropout(t) else 1.0
    hx, hy = sample_human(human, t)
    hand_id = scenario.tracker.hand_keypoint
    points = [(hx, hy)] + [(hx + dx, hy + dy) for dx, dy in human.extra_keypoints]
    # extras take the lowest ids not used by the hand
    ids = [hand_id] + [i for i in range(len(points)) if i != hand_id][: len(points) - 1]
    kps = tuple(Keypoint(i, project(p, scenario.camera), conf) for i, p in zip(ids, points))
    return KeypointFrame(t, kps)


def tick_plan(scenario: Scenario) -> tuple[int, int, dict[str, int]]:
    """Return (base_rate, tick_count, period_in_ticks per stream)."""
    r = scenario.rates
    base = math.lcm(r.vision, r.torque, r.control)
    n_ticks = math.floor(Fraction(scenario.duration) * base)
    periods = {"vision": base // r.vision, "torque": base // r.torque, "control": base // r.control}
    return base, n_ticks, periods


def _verdict_payload(monitor: str, v: MonitorVerdict, dwell_start: float | None) -> dict:
    return {
        "monitor": monitor,
        "state": v.state.value,
        "cause": v.cause.value if v.cause else None,
        "since": v.since,
        "dwell_start": dwell_start,
    }


def _frame_payload(frame: KeypointFrame) -> dict:
    return {"kps": [[k.id, k.pos[0], k.pos[1], k.confidence] for k in frame.keypoints]}


class _Loop:
    def __init__(self, scenario: Scenario) -> None:
        s = scenario
        self.s = s
        self.records: list[EventRecord] = []
        self.rng = make_rng(s.seed)
        self.vsm = VisionMonitor(s.vsm_config)
        self.csm = ContactMonitor(s.csm)
        self.tracker = IntentionTracker(s.goals, s.tracker)
        self.robot = RobotState(0.0, s.robot_start, (0.0, 0.0))
        self.latest_frame: KeypointFrame | None = None
        self.latest_seen: KeypointFrame | None = None  # last frame with a confident keypoint
        self.prev_hand: tuple[float, tuple[float, float]] | None = None
        self.contact: ContactClass | None = None  # classification of the open CSM episode
        self.contact_checked: set[int] = set()
        self.directive_key = None
        self.last_mode = InteractionMode.CE

    def emit(self, t: float, kind: str, payload: dict) -> None:
        self.records.append(EventRecord(t, kind, payload))

    def intent_payload(self) -> dict:
        return {"mode": self.tracker.mode.value, "posterior": list(self.tracker.posterior)}

    # -- torque ---------------------------------------------------------
    def torque_tick(self, t: float) -> None:
        s = self.s
        self.check_ground_truth(t)
        sample = synth_torque(t, s.contacts, s.noise_sigma, self.rng, s.num_joints, s.csm.monitored_joints)
        self.emit(t, "Torque", {"tau": list(sample.torques)})
        before = self.csm.verdict
        after = self.csm.step(sample)
        if after.state is before.state:
            return
        dwell = self.csm.state.below_since if not after.paused else None
        self.emit(t, "Verdict", _verdict_payload("csm", after, dwell))
        if after.paused:
            cls = fuse_contact(t, self.latest_seen, self.robot.pos, s.fusion, self._unproject)
            self.contact = cls
            truth = next((c.against for c in s.contacts if c.active(t)), None)
            self.emit(
                t,
                "Contact",
                {
                    "kind": cls.kind.value,
                    "human_distance": cls.human_distance,
                    "vision_age": cls.vision_age,
                    "against": truth,
                },
            )
        else:
            self.contact = None

    def _unproject(self, p_px):
        return unproject(p_px, self.s.camera)

    def check_ground_truth(self, t: float) -> None:
        """Scripted contact labels must agree with the scripted geometry."""
        s = self.s
        for i, c in enumerate(s.contacts):
            if i in self.contact_checked or t < c.t0:
                continue
            self.contact_checked.add(i)
            if s.human.present:
                hx, hy = sample_human(s.human, t)
                d = math.hypot(hx - self.robot.pos[0], hy - self.robot.pos[1])
            else:
                d = math.inf
            if c.against == "Human" and d > s.fusion.r_h:
                raise InvalidScenario(
                    [(f"contacts[{i}]", f"against=Human but hand is {d:.3f} m from robot (> r_h={s.fusion.r_h})")]
                )
            if c.against == "Object" and d <= s.fusion.r_h:
                raise InvalidScenario(
                    [(f"contacts[{i}]", f"against=Object but hand is {d:.3f} m from robot (<= r_h={s.fusion.r_h})")]
                )

    # -- vision ---------------------------------------------------------
    def vision_tick(self, t: float) -> None:
        s = self.s
        frame = build_frame(s, t)
        self.latest_frame = frame
        min_conf = s.vsm_config.min_confidence
        if frame.confident(min_conf):
            self.latest_seen = frame
        self.emit(t, "Frame", _frame_payload(frame))

        if s.vsm_enabled:
            before = self.vsm.verdict
            after = self.vsm.step(frame)
            if after.state is not before.state:
                dwell = self.vsm.clear_since if not after.paused else None
                self.emit(t, "Verdict", _verdict_payload("vsm", after, dwell))

        hand = next(
            (k for k in frame.keypoints if k.id == s.tracker.hand_keypoint and k.confidence >= min_conf),
            None,
        )
        if hand is None:
            self.prev_hand = None
            return
        pos = unproject(hand.pos, s.camera)
        if self.prev_hand is None:
            vel = (0.0, 0.0)
        else:
            pt, pp = self.prev_hand
            vel = ((pos[0] - pp[0]) / (t - pt), (pos[1] - pp[1]) / (t - pt))
        self.prev_hand = (t, pos)
        self.tracker.observe_hand(t, pos, vel)
        self.emit(t, "Intent", self.intent_payload())

    # -- control --------------------------------------------------------
    def obstacles(self) -> list[tuple[float, float]]:
        if self.latest_frame is None:
            return []
        min_conf = self.s.vsm_config.min_confidence
        return [unproject(k.pos, self.s.camera) for k in self.latest_frame.confident(min_conf)]

    def control_tick(self, t: float, dt: float, max_skew: float) -> None:
        s = self.s
        fx = sum(g.force[0] for g in s.guidance if g.active(t))
        fy = sum(g.force[1] for g in s.guidance if g.active(t))
        wrench = Wrench(t, (float(fx), float(fy)))

        vsm_v = self.vsm.verdict if s.vsm_enabled else MonitorVerdict.running(t=t)
        csm_v = self.csm.verdict if s.csm_enabled else MonitorVerdict.running(t=t)
        guidance_limit = 1.5 * s.tracker.f_co
        override = (
            csm_v.paused
            and self.contact is not None
            and self.contact.kind.value == "NonCritical"
            and self.tracker.mode is InteractionMode.CO
            and wrench.magnitude <= guidance_limit
        )
        safety_ok = not vsm_v.paused and (not csm_v.paused or override)
        self.emit(t, "Wrench", {"force": list(wrench.force), "safety_ok": safety_ok})

        mode = self.tracker.observe_wrench(wrench, safety_ok)
        if mode is not self.last_mode:
            self.last_mode = mode
            self.emit(t, "Intent", self.intent_payload())

        directive = arbitrate(
            vsm_v,
            csm_v,
            self.tracker.estimate(),
            max_skew=max_skew,
            contact=self.contact,
            guidance_force=wrench.magnitude,
            guidance_limit=guidance_limit,
        )
        key = (directive.action, directive.goal, directive.cause)
        if key != self.directive_key:
            self.directive_key = key
            self.emit(
                t,
                "Directive",
                {"action": directive.action.value, "goal": directive.goal, "cause": directive.cause},
            )

        # under HaltAll the generator for the current mode still runs; the gate zeroes it
        robot = RobotState(t, self.robot.pos, self.robot.vel)
        follow = directive.action is Action.ADMITTANCE_FOLLOW or (
            directive.action is Action.HALT_ALL and mode is InteractionMode.CO
        )
        goal_id = None
        if follow:
            _, cmd = admittance_step(robot, wrench, s.admittance, dt)
        else:
            goal_id = directive.goal or self.tracker.estimate().best_goal
            _, cmd = apf_step(robot, s.goals.position(goal_id), self.obstacles(), s.apf, dt)
        cmd = gate_command(directive, cmd)
        self.emit(
            t,
            "Command",
            {"source": cmd.source.value, "vel": list(cmd.vel), "pos": list(robot.pos), "goal": goal_id},
        )
        vx, vy = cmd.vel
        new_pos = (robot.pos[0] + vx * dt, robot.pos[1] + vy * dt)
        self.robot = RobotState(t + dt, new_pos, cmd.vel)


def run_scenario(scenario: Scenario) -> list[EventRecord]:
    """Run ``scenario`` and return its full event log (header first, metrics last)."""
    s = scenario
    base, n_ticks, periods = tick_plan(s)
    loop = _Loop(s)
    loop.emit(
        0.0,
        "Header",
        {
            "format": LOG_FORMAT,
            "version": LOG_VERSION,
            "rng": RNG_NAME,
            "seed": s.seed,
            "base_rate": base,
            "ticks": n_ticks,
            "scenario": s.to_dict(),
        },
    )
    dt = 1.0 / s.rates.control
    max_skew = max(1.0 / s.rates.control, 1.0 / s.rates.vision) if s.vsm_enabled else 1.0 / s.rates.control
    pt, pv, pc = periods["torque"], periods["vision"], periods["control"]
    for n in range(n_ticks):
        t = n / base
        if s.csm_enabled and n % pt == 0:
            loop.torque_tick(t)
        if n % pv == 0:
            loop.vision_tick(t)
        if n % pc == 0:
            loop.control_tick(t, dt, max_skew)
    log.debug("scenario %r: %d records over %d ticks", s.name, len(loop.records), n_ticks)

    end_t = loop.records[-1].t if loop.records else 0.0
    loop.records.extend(metric_records(compute_metrics(loop.records), end_t))
    return loop.records

