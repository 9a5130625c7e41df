"""Deterministic scenario simulation, event logging, metrics and replay."""

from .engine import build_frame, make_rng, run_scenario, synth_torque, tick_plan
from .eventlog import EventRecord, dumps, loads, read_log, write_log
from .metrics import Metrics, compute_metrics
from .replay import ReplayReport, replay
from .scenario import (
    CameraMap,
    ContactEvent,
    GuidanceEvent,
    HumanScript,
    Rates,
    Scenario,
    load_scenario,
    project,
    sample_human,
    scenario_from_dict,
    unproject,
)

__all__ = [
    "build_frame",
    "CameraMap",
    "compute_metrics",
    "ContactEvent",
    "dumps",
    "EventRecord",
    "GuidanceEvent",
    "HumanScript",
    "load_scenario",
    "loads",
    "make_rng",
    "Metrics",
    "project",
    "Rates",
    "read_log",
    "replay",
    "ReplayReport",
    "run_scenario",
    "sample_human",
    "Scenario",
    "scenario_from_dict",
    "synth_torque",
    "tick_plan",
    "unproject",
    "write_log",
]
