"""Safety supervision for human-robot shared workspaces.

Vision-based pause/resume over human keypoints, torque-based contact
detection, two-level intention tracking, potential-field and admittance
motion generation, and a supervisor that gates the resulting velocity.
"""

from .csm import ContactMonitor, CsmConfig, TorqueSample, csm_step, csm_trace, rolling_std
from .intention import (
    GoalSet,
    IntentEstimate,
    IntentionTracker,
    InteractionMode,
    TrackerConfig,
    Wrench,
    goal_likelihood,
    goal_posterior_step,
    mode_step,
)
from .motion import (
    AdmittanceParams,
    ApfParams,
    CommandSource,
    RobotState,
    VelocityCommand,
    admittance_step,
    apf_step,
    attractive_velocity,
    repulsive_velocity,
)
from .supervisor import Action, ContactKind, Directive, FusionConfig, arbitrate, fuse_contact, gate_command
from .verdict import MonitorState, MonitorVerdict, PauseCause
from .vsm import Keypoint, KeypointFrame, MotionRange, VisionMonitor, VsmConfig, point_in_range, vsm_step

__all__ = [
    "Action",
    "admittance_step",
    "AdmittanceParams",
    "apf_step",
    "ApfParams",
    "arbitrate",
    "attractive_velocity",
    "CommandSource",
    "ContactKind",
    "ContactMonitor",
    "csm_step",
    "csm_trace",
    "CsmConfig",
    "Directive",
    "fuse_contact",
    "FusionConfig",
    "gate_command",
    "goal_likelihood",
    "goal_posterior_step",
    "GoalSet",
    "IntentEstimate",
    "IntentionTracker",
    "InteractionMode",
    "Keypoint",
    "KeypointFrame",
    "mode_step",
    "MonitorState",
    "MonitorVerdict",
    "MotionRange",
    "PauseCause",
    "point_in_range",
    "repulsive_velocity",
    "RobotState",
    "rolling_std",
    "TorqueSample",
    "TrackerConfig",
    "VelocityCommand",
    "VisionMonitor",
    "vsm_step",
    "VsmConfig",
    "Wrench",
]

__version__ = "0.1.0"
