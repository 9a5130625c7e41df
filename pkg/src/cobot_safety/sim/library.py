"""Builders for the stock scenarios.

The workspace is an illustrative 1 m x 1 m square seen top-down at
400 px/m; goal areas sit near its corners and the preparation area lies just
outside its far edge, on the human's side.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .scenario import Scenario, scenario_from_dict

HAND_SPEED = 0.5  # m/s


def base_dict(**overrides: Any) -> dict[str, Any]:
    d: dict[str, Any] = {
        "name": "default",
        "duration": 10.0,
        "seed": 0,
        "rates": {"vision": 30, "torque": 500, "control": 100},
        "camera": {"scale": 400.0, "offset": [120.0, 40.0]},
        "range": {"x_min": 120.0, "y_min": 40.0, "x_max": 520.0, "y_max": 440.0},
        "goals": {"goals": [[0.1, 0.1], [0.9, 0.1], [0.9, 0.9], [0.1, 0.9]], "prep_area": [0.5, 1.3]},
        "robot": {"start": [0.5, 0.5]},
        "noise_sigma": 0.05,
    }
    d.update(overrides)
    return d


def default_scenario(seed: int = 0) -> Scenario:
    """Human carries a part from the preparation area to goal 4 and back."""
    d = base_dict(
        seed=seed,
        human={
            "waypoints": [[0.0, [0.5, 1.3]], [1.0, [0.5, 1.3]], [3.0, [0.12, 0.95]], [4.0, [0.12, 0.95]], [6.0, [0.5, 1.3]]],
            "extra_keypoints": [[0.0, 0.15], [0.05, 0.3]],
        },
    )
    return scenario_from_dict(d)


def apf_sweep_dict(seed: int, human: bool = True) -> dict[str, Any]:
    """Hand sweeps at 0.5 m/s across the robot's straight path.

    The seed picks the crossing time, angle and side; the sweep line is aimed
    at where a robot moving at full speed along its path would be at the
    crossing instant. Vision and contact monitors are off so the potential
    field alone has to keep the distance.
    """
    rng = np.random.default_rng(seed)
    start, goal = (0.2, 0.5), (0.85, 0.5)
    v_nominal = 0.25
    tc = float(rng.uniform(0.5, 2.2))
    cx, cy = start[0] + v_nominal * tc, start[1]
    ang = float(rng.uniform(math.radians(30), math.radians(150))) * float(rng.choice([-1.0, 1.0]))
    dx, dy = math.cos(ang), math.sin(ang)
    half = 1.0  # m of sweep on either side of the crossing
    ta, tb = tc - half / HAND_SPEED, tc + half / HAND_SPEED
    a = (cx - dx * half, cy - dy * half)
    b = (cx + dx * half, cy + dy * half)
    if ta < 0:
        f = -ta / (tb - ta)
        a = (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]))
        ta = 0.0
    d = base_dict(
        name=f"apf-sweep-{seed}",
        seed=seed,
        goals={"goals": [list(goal)], "prep_area": [0.5, 1.3]},
        robot={"start": list(start)},
        monitors={"vsm": False, "csm": False},
    )
    if human:
        d["human"] = {"waypoints": [[ta, list(a)], [tb, list(b)]]}
    return d


def apf_sweep_scenario(seed: int, human: bool = True) -> Scenario:
    return scenario_from_dict(apf_sweep_dict(seed, human))


def vsm_crossing_dict(enter_frame: int, leave_frame: int, dropout: tuple[float, float] | None = None) -> dict:
    """Hand crosses into the motion range between frames ``enter_frame - 1``
    and ``enter_frame`` and back out between ``leave_frame - 1`` and
    ``leave_frame`` (30 Hz frames, straight line along x)."""
    fp = 1.0 / 30
    outside, inside = -0.2, 0.2  # m; range starts at x = 0
    # crossings placed mid-way between frames so no frame sits on the edge
    t_in = (enter_frame - 0.5) * fp
    t_out = (leave_frame - 0.5) * fp
    speed = HAND_SPEED
    w_in0 = t_in - (0.0 - outside) / speed
    w_in1 = t_in + (inside - 0.0) / speed
    w_out0 = t_out - (inside - 0.0) / speed
    w_out1 = t_out + (0.0 - outside) / speed
    if not 0 <= w_in0 < w_in1 < w_out0 < w_out1:
        raise ValueError("frames too close together for a 0.5 m/s crossing")
    human = {
        "waypoints": [
            [0.0, [outside, 0.5]],
            [w_in0, [outside, 0.5]] if w_in0 > 0 else None,
            [w_in1, [inside, 0.5]],
            [w_out0, [inside, 0.5]],
            [w_out1, [outside, 0.5]],
        ]
    }
    human["waypoints"] = [w for w in human["waypoints"] if w is not None]
    if dropout is not None:
        human["dropouts"] = [list(dropout)]
    return base_dict(
        name="vsm-crossing",
        duration=w_out1 + 1.0,
        robot={"start": [0.9, 0.9]},
        human=human,
        monitors={"vsm": True, "csm": False},
    )


def contact_dict(
    against: str,
    hand_distance: float,
    *,
    t0: float = 2.0,
    amplitude: float = 5.0,
    dropout: tuple[float, float] | None = None,
    seed: int = 0,
) -> dict[str, Any]:
    """Robot parked on goal 1; a torque pulse hits while the hand waits
    ``hand_distance`` metres away (outside the workspace when far)."""
    robot = (0.1, 0.1)
    # hand sits along the diagonal, away from the workspace interior when far
    u = (-1 / math.sqrt(2), -1 / math.sqrt(2)) if hand_distance > 0.3 else (1.0, 0.0)
    hand = [robot[0] + u[0] * hand_distance, robot[1] + u[1] * hand_distance]
    human: dict[str, Any] = {"waypoints": [[0.0, hand]]}
    if dropout is not None:
        human["dropouts"] = [list(dropout)]
    return base_dict(
        name=f"contact-{against.lower()}",
        duration=t0 + 1.0,
        seed=seed,
        robot={"start": list(robot)},
        human=human,
        contacts=[{"t0": t0, "duration": 0.1, "amplitude": amplitude, "against": against}],
        # a nearby hand sits inside the motion range, so vision keeps the robot parked
        monitors={"vsm": True, "csm": True},
    )


def guidance_dict(seed: int = 0) -> dict[str, Any]:
    """Human pushes the robot towards goal 2 for 2 s, then lets go."""
    return base_dict(
        name="guidance",
        duration=5.0,
        seed=seed,
        robot={"start": [0.5, 0.5]},
        guidance=[{"t0": 1.0, "duration": 2.0, "force": [8.0, -3.0]}],
        monitors={"vsm": False, "csm": True},
    )


STOCK = {
    "default": lambda: default_scenario().to_dict(),
    "apf_sweep": lambda: apf_sweep_dict(7),
    "vsm_crossing": lambda: vsm_crossing_dict(30, 90, dropout=None),
    "contact_human": lambda: contact_dict("Human", 0.1),
    "contact_object": lambda: contact_dict("Object", 1.0),
    "guidance": guidance_dict,
}
