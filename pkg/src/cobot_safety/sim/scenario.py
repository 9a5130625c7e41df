"""Scenario description, loading and validation.

Scenarios are JSON documents; the structural schema lives next to this
module in ``scenario.schema.json``. Every omitted field takes the default of
the corresponding dataclass, and :meth:`Scenario.to_dict` emits the fully
expanded form, which is what gets embedded in event-log headers.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from ..csm import CsmConfig
from ..errors import InvalidScenario
from ..intention import GoalSet, TrackerConfig
from ..motion import AdmittanceParams, ApfParams
from ..supervisor import FusionConfig
from ..vsm import MotionRange, VsmConfig

Vec2 = tuple[float, float]


@dataclass(frozen=True)
class CameraMap:
    """Affine workspace (m) to image (px) map standing in for calibration."""

    scale: float = 400.0
    offset: Vec2 = (120.0, 40.0)

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise ValueError("camera scale must be positive")


def project(p_ws, cam: CameraMap) -> Vec2:
    return (cam.scale * p_ws[0] + cam.offset[0], cam.scale * p_ws[1] + cam.offset[1])


def unproject(p_px, cam: CameraMap) -> Vec2:
    return ((p_px[0] - cam.offset[0]) / cam.scale, (p_px[1] - cam.offset[1]) / cam.scale)


@dataclass(frozen=True)
class HumanScript:
    """Piecewise-linear hand trajectory plus rigid extra keypoints.

    ``dropouts`` are ``[start, end)`` intervals during which every keypoint
    is reported with confidence 0.
    """

    waypoints: tuple[tuple[float, Vec2], ...] = ()
    extra_keypoints: tuple[Vec2, ...] = ()
    dropouts: tuple[tuple[float, float], ...] = ()

    @property
    def present(self) -> bool:
        return bool(self.waypoints)

    def in_dropout(self, t: float) -> bool:
        return any(a <= t < b for a, b in self.dropouts)


def sample_human(script: HumanScript, t: float) -> Vec2:
    """Hand position at ``t``: linear between waypoints, held outside them."""
    wps = script.waypoints
    if not wps:
        raise ValueError("human script has no waypoints")
    times = [w[0] for w in wps]
    i = bisect_right(times, t)
    if i == 0:
        return wps[0][1]
    if i == len(wps):
        return wps[-1][1]
    (t0, p0), (t1, p1) = wps[i - 1], wps[i]
    if t == t0:
        return p0
    a = (t - t0) / (t1 - t0)
    return (p0[0] + a * (p1[0] - p0[0]), p0[1] + a * (p1[1] - p0[1]))


@dataclass(frozen=True)
class ContactEvent:
    t0: float
    duration: float
    amplitude: tuple[float, ...]  # N·m per monitored joint
    against: str = "Object"

    def active(self, t: float) -> bool:
        return self.t0 <= t <= self.t0 + self.duration


@dataclass(frozen=True)
class GuidanceEvent:
    t0: float
    duration: float
    force: Vec2

    def active(self, t: float) -> bool:
        return self.t0 <= t <= self.t0 + self.duration


@dataclass(frozen=True)
class Rates:
    vision: int = 30
    torque: int = 500
    control: int = 100


@dataclass(frozen=True)
class Scenario:
    duration: float
    seed: int = 0
    name: str = ""
    rates: Rates = field(default_factory=Rates)
    camera: CameraMap = field(default_factory=CameraMap)
    range: MotionRange = field(default_factory=lambda: MotionRange(120.0, 40.0, 520.0, 440.0))
    goals: GoalSet = field(
        default_factory=lambda: GoalSet(((0.1, 0.1), (0.9, 0.1), (0.9, 0.9), (0.1, 0.9)), (0.5, 1.3))
    )
    robot_start: Vec2 = (0.5, 0.5)
    human: HumanScript = field(default_factory=HumanScript)
    contacts: tuple[ContactEvent, ...] = ()
    guidance: tuple[GuidanceEvent, ...] = ()
    noise_sigma: float = 0.05
    num_joints: int = 6
    vsm_enabled: bool = True
    csm_enabled: bool = True
    vsm: VsmConfig | None = None  # None -> defaults over ``range``
    csm: CsmConfig = field(default_factory=CsmConfig)
    tracker: TrackerConfig = field(default_factory=TrackerConfig)
    apf: ApfParams = field(default_factory=ApfParams)
    admittance: AdmittanceParams = field(default_factory=AdmittanceParams)
    fusion: FusionConfig = field(default_factory=FusionConfig)

    @property
    def vsm_config(self) -> VsmConfig:
        return self.vsm if self.vsm is not None else VsmConfig(self.range)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Scenario:
        return scenario_from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        return scenario_to_dict(self)

    def with_overrides(self, **changes: Any) -> Scenario:
        d = self.to_dict()
        d.update(changes)
        return scenario_from_dict(d)


@lru_cache(maxsize=1)
def scenario_schema() -> dict[str, Any]:
    text = resources.files(__package__).joinpath("scenario.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def validate_dict(data: Any) -> list[tuple[str, str]]:
    """Return ``(field_path, message)`` diagnostics; empty when valid."""
    validator = jsonschema.Draft202012Validator(scenario_schema())
    problems = [
        (_path(e.absolute_path), e.message)
        for e in sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    ]
    if problems:
        return problems

    def finite(path, *values):
        if not all(math.isfinite(v) for v in values):
            problems.append((path, "values must be finite"))

    finite("duration", data["duration"])
    rng = data.get("range")
    if rng and not (rng["x_min"] < rng["x_max"] and rng["y_min"] < rng["y_max"]):
        problems.append(("range", "need x_min < x_max and y_min < y_max"))

    goals = data.get("goals", {}).get("goals", [])
    if len({tuple(g) for g in goals}) != len(goals):
        problems.append(("goals.goals", "goal positions must be pairwise distinct"))

    human = data.get("human") or {}
    times = [w[0] for w in human.get("waypoints", [])]
    for i in range(1, len(times)):
        if not times[i] > times[i - 1]:
            problems.append((f"human.waypoints[{i}]", "waypoint times must be strictly increasing"))
    for i, (a, b) in enumerate(human.get("dropouts", [])):
        if not a < b:
            problems.append((f"human.dropouts[{i}]", "dropout interval must have start < end"))

    csm = data.get("csm", {})
    lo, hi = csm.get("theta_lo", CsmConfig.theta_lo), csm.get("theta_hi", CsmConfig.theta_hi)
    if not lo < hi:
        problems.append(("csm", "theta_lo must be below theta_hi"))
    joints = csm.get("monitored_joints", list(CsmConfig.monitored_joints))
    n_joints = data.get("num_joints", Scenario.num_joints)
    for i, j in enumerate(joints):
        if j >= n_joints:
            problems.append((f"csm.monitored_joints[{i}]", f"joint {j} >= num_joints {n_joints}"))
    torque_rate = data.get("rates", {}).get("torque", Rates.torque)
    window = csm.get("window", CsmConfig.window)
    if round(window * torque_rate) < 2:
        problems.append(("csm.window", "window must span at least 2 torque samples"))
    for i, c in enumerate(data.get("contacts", [])):
        amp = c["amplitude"]
        if isinstance(amp, list) and len(amp) != len(joints):
            problems.append((f"contacts[{i}].amplitude", f"expected {len(joints)} entries, one per monitored joint"))

    tracker = data.get("tracker", {})
    if not tracker.get("f_ce", TrackerConfig.f_ce) < tracker.get("f_co", TrackerConfig.f_co):
        problems.append(("tracker", "f_ce must be below f_co"))
    return problems


def scenario_from_dict(data: Any) -> Scenario:
    problems = validate_dict(data)
    if problems:
        raise InvalidScenario(problems)
    try:
        return _build(data)
    except ValueError as exc:
        raise InvalidScenario([("<root>", str(exc))]) from exc


def _build(data: dict[str, Any]) -> Scenario:
    rates = Rates(**data.get("rates", {}))
    vec = lambda v: (float(v[0]), float(v[1]))  # noqa: E731
    cam_d = data.get("camera", {})
    camera = CameraMap(
        float(cam_d.get("scale", CameraMap.scale)), vec(cam_d.get("offset", CameraMap.offset))
    )
    kwargs: dict[str, Any] = dict(
        duration=float(data["duration"]),
        seed=int(data.get("seed", 0)),
        name=data.get("name", ""),
        rates=rates,
        camera=camera,
        noise_sigma=float(data.get("noise_sigma", Scenario.noise_sigma)),
        num_joints=int(data.get("num_joints", Scenario.num_joints)),
    )
    if "range" in data:
        r = data["range"]
        kwargs["range"] = MotionRange(float(r["x_min"]), float(r["y_min"]), float(r["x_max"]), float(r["y_max"]))
    if "goals" in data:
        g = data["goals"]
        kwargs["goals"] = GoalSet(tuple(vec(p) for p in g["goals"]), vec(g.get("prep_area", (0.0, 0.0))))
    if "robot" in data and "start" in data["robot"]:
        kwargs["robot_start"] = vec(data["robot"]["start"])
    human = data.get("human") or {}
    kwargs["human"] = HumanScript(
        waypoints=tuple((float(t), vec(p)) for t, p in human.get("waypoints", [])),
        extra_keypoints=tuple(vec(p) for p in human.get("extra_keypoints", [])),
        dropouts=tuple((float(a), float(b)) for a, b in human.get("dropouts", [])),
    )

    csm_d = dict(data.get("csm", {}))
    if "monitored_joints" in csm_d:
        csm_d["monitored_joints"] = tuple(csm_d["monitored_joints"])
    csm = CsmConfig(**csm_d, sample_rate=float(rates.torque))
    kwargs["csm"] = csm

    contacts = []
    for c in data.get("contacts", []):
        amp = c["amplitude"]
        amp = tuple(float(a) for a in amp) if isinstance(amp, list) else (float(amp),) * len(csm.monitored_joints)
        contacts.append(ContactEvent(float(c["t0"]), float(c["duration"]), amp, c.get("against", "Object")))
    kwargs["contacts"] = tuple(contacts)
    kwargs["guidance"] = tuple(
        GuidanceEvent(float(g["t0"]), float(g["duration"]), vec(g["force"])) for g in data.get("guidance", [])
    )

    mons = data.get("monitors", {})
    kwargs["vsm_enabled"] = bool(mons.get("vsm", True))
    kwargs["csm_enabled"] = bool(mons.get("csm", True))
    range_ = kwargs.get("range", Scenario.__dataclass_fields__["range"].default_factory())
    kwargs["vsm"] = VsmConfig(range_, **data.get("vsm", {}))

    tracker_d = dict(data.get("tracker", {}))
    if "lambda" in tracker_d:
        tracker_d["lam"] = tracker_d.pop("lambda")
    kwargs["tracker"] = TrackerConfig(**tracker_d)
    kwargs["apf"] = ApfParams(**data.get("apf", {}))
    kwargs["admittance"] = AdmittanceParams(**data.get("admittance", {}))
    kwargs["fusion"] = FusionConfig(**data.get("fusion", {}), min_confidence=kwargs["vsm"].min_confidence)
    return Scenario(**kwargs)


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    vsm = s.vsm_config
    tracker = asdict(s.tracker)
    tracker["lambda"] = tracker.pop("lam")
    csm = asdict(s.csm)
    csm.pop("sample_rate")
    csm["monitored_joints"] = list(csm["monitored_joints"])
    fusion = asdict(s.fusion)
    fusion.pop("min_confidence")
    return {
        "name": s.name,
        "duration": s.duration,
        "seed": s.seed,
        "rates": asdict(s.rates),
        "camera": {"scale": s.camera.scale, "offset": list(s.camera.offset)},
        "range": asdict(s.range),
        "goals": {"goals": [list(g) for g in s.goals.goals], "prep_area": list(s.goals.prep_area)},
        "robot": {"start": list(s.robot_start)},
        "human": {
            "waypoints": [[t, list(p)] for t, p in s.human.waypoints],
            "extra_keypoints": [list(p) for p in s.human.extra_keypoints],
            "dropouts": [list(d) for d in s.human.dropouts],
        },
        "contacts": [
            {"t0": c.t0, "duration": c.duration, "amplitude": list(c.amplitude), "against": c.against}
            for c in s.contacts
        ],
        "guidance": [{"t0": g.t0, "duration": g.duration, "force": list(g.force)} for g in s.guidance],
        "noise_sigma": s.noise_sigma,
        "num_joints": s.num_joints,
        "monitors": {"vsm": s.vsm_enabled, "csm": s.csm_enabled},
        "vsm": {"min_confidence": vsm.min_confidence, "resume_dwell": vsm.resume_dwell},
        "csm": csm,
        "tracker": tracker,
        "apf": asdict(s.apf),
        "admittance": asdict(s.admittance),
        "fusion": fusion,
    }


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidScenario([("<file>", f"not valid JSON: {exc}")]) from exc
    return scenario_from_dict(data)
