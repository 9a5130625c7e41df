"""Re-run the monitors over the input streams stored in an event log."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..csm import ContactMonitor, TorqueSample
from ..errors import MalformedLog
from ..intention import ModeState, Wrench, mode_step
from ..vsm import Keypoint, KeypointFrame, VisionMonitor
from .eventlog import EventRecord, header
from .scenario import scenario_from_dict


@dataclass
class ReplayReport:
    checked: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _transitions(records: Sequence[EventRecord], monitor: str) -> list[tuple[float, str, str | None]]:
    return [
        (r.t, r.payload["state"], r.payload["cause"])
        for r in records
        if r.kind == "Verdict" and r.payload["monitor"] == monitor
    ]


def replay(records: Sequence[EventRecord]) -> ReplayReport:
    """Compare logged verdict transitions and mode switches with a fresh run.

    Vision and contact monitors are stepped over the logged Frame and Torque
    records; the mode switch is stepped over the logged Wrench records
    (which carry the supervisor's ``safety_ok`` input).
    """
    try:
        scen = scenario_from_dict(header(list(records))["scenario"])
    except Exception as exc:
        raise MalformedLog(f"header does not hold a valid scenario: {exc}") from exc

    vsm = VisionMonitor(scen.vsm_config)
    csm = ContactMonitor(scen.csm)
    mode_state = ModeState()
    got = {"vsm": [], "csm": []}
    modes: list[tuple[float, str]] = []

    for r in records:
        p = r.payload
        if r.kind == "Frame" and scen.vsm_enabled:
            frame = KeypointFrame(r.t, tuple(Keypoint(int(i), (x, y), c) for i, x, y, c in p["kps"]))
            before = vsm.verdict.state
            v = vsm.step(frame)
            if v.state is not before:
                got["vsm"].append((r.t, v.state.value, v.cause.value if v.cause else None))
        elif r.kind == "Torque" and scen.csm_enabled:
            before = csm.verdict.state
            v = csm.step(TorqueSample(r.t, tuple(p["tau"])))
            if v.state is not before:
                got["csm"].append((r.t, v.state.value, v.cause.value if v.cause else None))
        elif r.kind == "Wrench":
            before_mode = mode_state.mode
            mode_state, mode = mode_step(mode_state, Wrench(r.t, tuple(p["force"])), p["safety_ok"], scen.tracker)
            if mode is not before_mode:
                modes.append((r.t, mode.value))

    report = ReplayReport()
    for monitor in ("vsm", "csm"):
        expected = _transitions(records, monitor)
        report.checked += len(expected)
        if expected != got[monitor]:
            report.mismatches.append(f"{monitor}: logged {expected} vs replayed {got[monitor]}")

    logged_modes = []
    last = "CE"
    for r in records:
        if r.kind == "Intent" and r.payload["mode"] != last:
            last = r.payload["mode"]
            logged_modes.append((r.t, last))
    report.checked += len(logged_modes)
    if logged_modes != modes:
        report.mismatches.append(f"mode: logged {logged_modes} vs replayed {modes}")
    return report
