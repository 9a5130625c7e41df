"""Planar end-effector motion generators.

Coexistence uses a velocity-level artificial potential field (saturated
quadratic attraction plus Khatib-style repulsion from human keypoints).
Cooperation uses a virtual mass-damper admittance rendered with a
semi-implicit Euler step. Both clamp speed radially to ``v_max``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .intention import Wrench

RHO_MIN = 1e-3  # m, repulsion singularity guard
GOAL_TOLERANCE = 0.01  # m


class CommandSource(enum.Enum):
    APF = "Apf"
    ADMITTANCE = "Admittance"
    HALT = "Halt"


@dataclass(frozen=True)
class ApfParams:
    zeta: float = 1.0
    d_cap: float = 0.5
    eta: float = 0.05
    rho0: float = 0.4
    v_max: float = 0.25
    stall_speed: float = 0.005

    def __post_init__(self) -> None:
        for name in ("zeta", "d_cap", "eta", "rho0", "v_max", "stall_speed"):
            if not getattr(self, name) > 0:
                raise ValueError(f"ApfParams.{name} must be positive")


@dataclass(frozen=True)
class AdmittanceParams:
    mass: float = 1.0
    damping: float = 20.0
    v_max: float = 0.25

    def __post_init__(self) -> None:
        if self.mass <= 0 or self.damping <= 0 or self.v_max <= 0:
            raise ValueError("mass, damping and v_max must be positive")


@dataclass(frozen=True)
class RobotState:
    t: float
    pos: tuple[float, float]
    vel: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class VelocityCommand:
    t: float
    vel: tuple[float, float]
    source: CommandSource

    def __post_init__(self) -> None:
        if self.source is CommandSource.HALT and self.vel != (0.0, 0.0):
            raise ValueError("Halt commands carry zero velocity")

    @classmethod
    def halt(cls, t: float) -> VelocityCommand:
        return cls(t, (0.0, 0.0), CommandSource.HALT)


def _vec(v) -> np.ndarray:
    return np.asarray(v, dtype=float).reshape(2)


def _tup(v: np.ndarray) -> tuple[float, float]:
    return (float(v[0]), float(v[1]))


def clamp_speed(v, v_max: float) -> np.ndarray:
    """Scale ``v`` radially so that ``|v| <= v_max``; direction is preserved."""
    v = _vec(v)
    speed = math.hypot(v[0], v[1])
    if speed > v_max:
        v = v * (v_max / speed)
        # rounding can leave the scaled norm a hair above v_max
        while math.hypot(v[0], v[1]) > v_max:
            v = v * (1.0 - 2 ** -52)
    return v


def attractive_velocity(pos, goal, p: ApfParams) -> np.ndarray:
    diff = _vec(goal) - _vec(pos)
    d = math.hypot(diff[0], diff[1])
    if d <= p.d_cap:
        return p.zeta * diff
    return (p.zeta * p.d_cap / d) * diff


def repulsive_velocity(pos, obstacle, p: ApfParams, fallback_dir=(1.0, 0.0)) -> np.ndarray:
    """Push away from ``obstacle`` inside the influence radius ``rho0``.

    Below ``RHO_MIN`` the magnitude is held at its ``RHO_MIN`` value; if the
    two points coincide exactly, ``fallback_dir`` supplies the direction.
    """
    diff = _vec(pos) - _vec(obstacle)
    rho = math.hypot(diff[0], diff[1])
    if rho >= p.rho0:
        return np.zeros(2)
    if rho > 0.0:
        direction = diff / rho
    else:
        direction = _vec(fallback_dir)
        direction = direction / math.hypot(direction[0], direction[1])
    r = max(rho, RHO_MIN)
    magnitude = p.eta * (1.0 / r - 1.0 / p.rho0) / (r * r)
    return magnitude * direction


def apf_step(
    state: RobotState, goal, obstacles: Sequence, p: ApfParams, dt: float
) -> tuple[RobotState, VelocityCommand]:
    if dt <= 0:
        raise ValueError("dt must be positive")
    pos = _vec(state.pos)
    goal = _vec(goal)
    t = state.t + dt

    vel = _vec(state.vel)
    speed = math.hypot(vel[0], vel[1])
    # direction of travel reversed: where the robot came from
    fallback = -vel / speed if speed > 0 else np.array([1.0, 0.0])

    v = attractive_velocity(pos, goal, p)
    near = False
    for obs in obstacles:
        v = v + repulsive_velocity(pos, obs, p, fallback)
        o = _vec(obs)
        near = near or math.hypot(pos[0] - o[0], pos[1] - o[1]) < p.rho0
    v = clamp_speed(v, p.v_max)

    to_goal = math.hypot(goal[0] - pos[0], goal[1] - pos[1])
    if near and to_goal > GOAL_TOLERANCE and math.hypot(v[0], v[1]) < p.stall_speed:
        cmd = VelocityCommand.halt(state.t)
        return RobotState(t, state.pos, (0.0, 0.0)), cmd

    cmd = VelocityCommand(state.t, _tup(v), CommandSource.APF)
    return RobotState(t, _tup(pos + v * dt), cmd.vel), cmd


def admittance_step(
    state: RobotState, wrench: Wrench, p: AdmittanceParams, dt: float
) -> tuple[RobotState, VelocityCommand]:
    """One semi-implicit step of ``mass * dv/dt + damping * v = F``.

    Implicit in the damping term, so an unforced velocity decays by the
    factor ``1 / (1 + dt * damping / mass)`` for any ``dt > 0``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    v = (_vec(state.vel) + dt * _vec(wrench.force) / p.mass) / (1.0 + dt * p.damping / p.mass)
    v = clamp_speed(v, p.v_max)
    t = state.t + dt
    cmd = VelocityCommand(state.t, _tup(v), CommandSource.ADMITTANCE)
    return RobotState(t, _tup(_vec(state.pos) + v * dt), cmd.vel), cmd
