"""Two-level human intention tracking.

Task level: a recursive Bayesian posterior over goal areas, fed by the hand's
position and velocity. The observation model rewards goals the hand is
heading towards (``exp(beta * cos(angle))``) and nearby goals
(``exp(-gamma * distance)``); a small mixing step towards the uniform
distribution keeps the filter able to follow a change of mind.

Interaction-mode level: coexistence (CE) vs cooperation (CO), switched by
sustained end-effector force with a dual-threshold dwell rule.

This observation model is a simple stand-in chosen for its observable
behaviour, not a published algorithm.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NonMonotonicTimestamp

_DWELL_SLACK = 1e-9


class InteractionMode(enum.Enum):
    CE = "CE"  # coexistence
    CO = "CO"  # cooperation


@dataclass(frozen=True)
class GoalSet:
    """Goal areas in workspace metres; goal ids are 1-based list positions."""

    goals: tuple[tuple[float, float], ...]
    prep_area: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        goals = tuple((float(x), float(y)) for x, y in self.goals)
        object.__setattr__(self, "goals", goals)
        object.__setattr__(self, "prep_area", (float(self.prep_area[0]), float(self.prep_area[1])))
        if not goals:
            raise ValueError("GoalSet needs at least one goal")
        if len(set(goals)) != len(goals):
            raise ValueError("goal positions must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.goals)

    def position(self, goal_id: int) -> tuple[float, float]:
        if not 1 <= goal_id <= len(self.goals):
            raise IndexError(f"goal id {goal_id} outside 1..{len(self.goals)}")
        return self.goals[goal_id - 1]

    @property
    def ids(self) -> list[int]:
        return list(range(1, len(self.goals) + 1))


@dataclass(frozen=True)
class Wrench:
    t: float
    force: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if not all(math.isfinite(f) for f in self.force):
            raise ValueError("wrench force must be finite")

    @property
    def magnitude(self) -> float:
        return math.hypot(*self.force)


@dataclass(frozen=True)
class TrackerConfig:
    beta: float = 4.0
    gamma: float = 1.0
    lam: float = 0.02
    eps_speed: float = 0.02
    f_co: float = 5.0
    f_ce: float = 1.0
    t_co: float = 0.3
    t_ce: float = 0.5
    hand_keypoint: int = 0

    def __post_init__(self) -> None:
        if not self.f_ce < self.f_co:
            raise ValueError("f_ce must be below f_co")
        if self.t_co <= 0 or self.t_ce <= 0:
            raise ValueError("t_co and t_ce must be positive")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")


@dataclass(frozen=True)
class IntentEstimate:
    goal_posterior: tuple[float, ...]
    mode: InteractionMode
    t: float

    @property
    def best_goal(self) -> int:
        """1-based argmax of the posterior; ties go to the lowest id."""
        post = self.goal_posterior
        return max(range(len(post)), key=lambda i: (post[i], -i)) + 1


def _log_likelihood(hand_pos, hand_vel, goal_pos, cfg: TrackerConfig) -> float:
    vx, vy = hand_vel
    speed = math.hypot(vx, vy)
    if speed < cfg.eps_speed:
        return 0.0
    dx, dy = goal_pos[0] - hand_pos[0], goal_pos[1] - hand_pos[1]
    d = math.hypot(dx, dy)
    # hand sitting on the goal: treat the heading as aligned
    cos = 1.0 if d == 0.0 else (vx * dx + vy * dy) / (speed * d)
    return cfg.beta * max(-1.0, min(1.0, cos)) - cfg.gamma * d


def goal_likelihood(hand_pos, hand_vel, goal_pos, cfg: TrackerConfig) -> float:
    """Unnormalised likelihood that the hand is heading to ``goal_pos``.

    Returns exactly 1 when the hand is slower than ``cfg.eps_speed``.
    """
    return math.exp(_log_likelihood(hand_pos, hand_vel, goal_pos, cfg))


def uniform_prior(n: int) -> tuple[float, ...]:
    return (1.0 / n,) * n


def goal_posterior_step(
    prior: Sequence[float], hand_pos, hand_vel, goals: GoalSet, cfg: TrackerConfig
) -> tuple[float, ...]:
    prior = np.asarray(prior, dtype=float)
    n = len(goals)
    if prior.shape != (n,):
        raise DimensionMismatch(f"prior has {prior.size} entries for {n} goals")
    mixed = (1.0 - cfg.lam) * prior + cfg.lam / n
    # log space: a far-away hand must not underflow every goal to zero
    loglik = np.array([_log_likelihood(hand_pos, hand_vel, g, cfg) for g in goals.goals])
    with np.errstate(divide="ignore"):
        logpost = np.log(mixed) + loglik
    logpost -= logpost.max()
    post = np.exp(logpost)
    post /= post.sum()
    return tuple(float(p) for p in post)


@dataclass(frozen=True)
class ModeState:
    mode: InteractionMode = InteractionMode.CE
    last_t: float | None = None
    strong_since: float | None = None  # |F| >= f_co stretch start
    weak_since: float | None = None  # |F| <= f_ce stretch start


def mode_step(
    state: ModeState, wrench: Wrench, safety_ok: bool, cfg: TrackerConfig
) -> tuple[ModeState, InteractionMode]:
    """Dual-threshold dwell switch between coexistence and cooperation.

    CO requires ``|F| >= f_co`` held for ``t_co`` with ``safety_ok``; CE
    returns after ``|F| <= f_ce`` held for ``t_ce``. ``safety_ok=False``
    forces CE immediately and restarts both timers.
    """
    t = wrench.t
    if state.last_t is not None and t <= state.last_t:
        raise NonMonotonicTimestamp(t, state.last_t)
    if not safety_ok:
        return ModeState(InteractionMode.CE, t), InteractionMode.CE

    f = wrench.magnitude
    strong = (state.strong_since if state.strong_since is not None else t) if f >= cfg.f_co else None
    weak = (state.weak_since if state.weak_since is not None else t) if f <= cfg.f_ce else None

    mode = state.mode
    if mode is InteractionMode.CE and strong is not None and t - strong >= cfg.t_co - _DWELL_SLACK:
        mode = InteractionMode.CO
    elif mode is InteractionMode.CO and weak is not None and t - weak >= cfg.t_ce - _DWELL_SLACK:
        mode = InteractionMode.CE
    return ModeState(mode, t, strong, weak), mode


class IntentionTracker:
    """Holds the goal posterior and interaction mode between steps."""

    def __init__(self, goals: GoalSet, cfg: TrackerConfig) -> None:
        self.goals = goals
        self.cfg = cfg
        self.posterior = uniform_prior(len(goals))
        self.mode_state = ModeState()
        self.t = 0.0

    @property
    def mode(self) -> InteractionMode:
        return self.mode_state.mode

    def observe_hand(self, t: float, hand_pos, hand_vel) -> tuple[float, ...]:
        self.posterior = goal_posterior_step(self.posterior, hand_pos, hand_vel, self.goals, self.cfg)
        self.t = t
        return self.posterior

    def observe_wrench(self, wrench: Wrench, safety_ok: bool) -> InteractionMode:
        self.mode_state, mode = mode_step(self.mode_state, wrench, safety_ok, self.cfg)
        self.t = wrench.t
        return mode

    def estimate(self) -> IntentEstimate:
        return IntentEstimate(self.posterior, self.mode, self.t)
