"""Contact-based safety monitoring over base-joint torques.

The rolling (population) standard deviation of each monitored joint's torque
is compared against two thresholds. Crossing ``theta_hi`` on any joint pauses
the robot on that very sample; resuming needs every joint strictly below
``theta_lo`` without interruption for ``resume_dwell`` seconds.
"""

from __future__ import annotations

import math
import sys
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    InsufficientSamples,
    JointIndexOutOfRange,
    NonMonotonicTimestamp,
)
from .verdict import MonitorState, MonitorVerdict, PauseCause

_EPS = sys.float_info.epsilon
# recompute from the buffer once accumulated rounding may exceed this share of M2
_DRIFT_BUDGET = 1e-10
_REFRESH_EVERY = 10_000
_DWELL_SLACK = 1e-9


@dataclass(frozen=True)
class TorqueSample:
    t: float
    torques: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "torques", tuple(float(v) for v in self.torques))
        if not all(math.isfinite(v) for v in self.torques):
            raise ValueError(f"non-finite torque in sample at t={self.t!r}")


@dataclass(frozen=True)
class CsmConfig:
    monitored_joints: tuple[int, ...] = (0, 1)
    window: float = 0.2
    theta_hi: float = 2.0
    theta_lo: float = 0.5
    resume_dwell: float = 5.0
    sample_rate: float = 500.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "monitored_joints", tuple(int(j) for j in self.monitored_joints))
        if not self.monitored_joints:
            raise ValueError("monitored_joints must not be empty")
        if any(j < 0 for j in self.monitored_joints):
            raise JointIndexOutOfRange(f"negative joint index in {self.monitored_joints}")
        if not 0 < self.theta_lo < self.theta_hi:
            raise ValueError("thresholds must satisfy 0 < theta_lo < theta_hi")
        if self.window <= 0 or self.sample_rate <= 0:
            raise ValueError("window and sample_rate must be positive")
        if self.resume_dwell <= 0:
            raise ValueError("resume_dwell must be positive")
        if self.capacity < 2:
            raise ValueError("window * sample_rate must cover at least 2 samples")

    @property
    def capacity(self) -> int:
        return int(round(self.window * self.sample_rate))


def rolling_std(window_values: Sequence[float]) -> float:
    """Population standard deviation of ``window_values`` (two-pass)."""
    n = len(window_values)
    if n < 2:
        raise InsufficientSamples(f"need at least 2 values, got {n}")
    mean = math.fsum(window_values) / n
    var = math.fsum((x - mean) ** 2 for x in window_values) / n
    return math.sqrt(var)


class RollingWindow:
    """Fixed-capacity window with O(1) amortised mean/variance updates.

    Uses the sliding form of Welford's update on values shifted by a
    reference level close to the data, so rounding scales with the spread
    of the window rather than its offset. Bounds on the rounding error
    accumulated in the running mean and in M2 since the last exact recompute
    are tracked alongside them; when the M2 bound becomes significant relative
    to M2 (e.g. a quiet window right after a large pulse left it) the
    statistics are rebuilt from the buffer and the shift is re-centred.
    """

    def __init__(self, capacity: int) -> None:
        if capacity < 2:
            raise ValueError("capacity must be >= 2")
        self.capacity = capacity
        self.buffer: deque[float] = deque(maxlen=capacity)
        self._shift = 0.0
        self._mean = 0.0  # of the shifted values
        self._m2 = 0.0
        self._drift = 0.0  # error bound on _m2
        self._mean_err = 0.0  # error bound on _mean
        self._pushes = 0

    def __len__(self) -> int:
        return len(self.buffer)

    @property
    def full(self) -> bool:
        return len(self.buffer) == self.capacity

    def push(self, x: float) -> None:
        buf = self.buffer
        n = len(buf)
        if n == 0:
            self._shift = x
        xs = x - self._shift
        old_err = self._mean_err
        if n < self.capacity:
            buf.append(x)
            delta = xs - self._mean
            step = delta / (n + 1)
            self._mean += step
            self._mean_err += _EPS * (abs(self._mean) + abs(step))
            a = xs - self._mean
            dm2 = delta * a
            self._m2 += dm2
            # mean and shift errors enter through both factors of the increment
            e_x = _EPS * abs(xs)
            self._drift += abs(a) * (old_err + e_x) + abs(delta) * (self._mean_err + e_x)
            self._drift += 4 * _EPS * (abs(dm2) + abs(self._m2))
        else:
            ys = buf[0] - self._shift
            buf.append(x)  # maxlen evicts the oldest value
            old_mean = self._mean
            delta = xs - ys
            step = delta / n
            mean = old_mean + step
            self._mean = mean
            self._mean_err = mean_err = old_err + _EPS * (abs(mean) + abs(step))
            a, b = xs - mean, ys - old_mean
            m2 = self._m2 + delta * (a + b)
            self._m2 = m2
            ad, sab = abs(delta), abs(a) + abs(b)
            e_xy = _EPS * (abs(xs) + abs(ys))
            self._drift += ad * (old_err + mean_err + e_xy) + e_xy * sab + 4 * _EPS * (ad * sab + abs(m2))
        self._pushes += 1
        if self._pushes % _REFRESH_EVERY == 0:
            self.recompute()

    def recompute(self) -> None:
        n = len(self.buffer)
        if n == 0:
            self._shift = self._mean = self._m2 = 0.0
        else:
            self._shift = math.fsum(self.buffer) / n
            shifted = [v - self._shift for v in self.buffer]
            self._mean = math.fsum(shifted) / n
            self._m2 = math.fsum((v - self._mean) ** 2 for v in shifted)
        self._drift = 0.0
        self._mean_err = 0.0

    @property
    def mean(self) -> float:
        return self._shift + self._mean

    def std(self) -> float:
        n = len(self.buffer)
        if n < 2:
            raise InsufficientSamples(f"need at least 2 values, got {n}")
        if self._drift > _DRIFT_BUDGET * self._m2:
            self.recompute()
        return math.sqrt(max(self._m2, 0.0) / n)


@dataclass
class CsmState:
    """Mutable monitor state; one instance per torque stream.

    ``csm_step`` updates it in place (the rolling buffers are too large to
    copy per sample) and returns it for symmetry with the other monitors.
    """

    windows: dict[int, RollingWindow]
    verdict: MonitorVerdict = field(default_factory=MonitorVerdict)
    last_t: float | None = None
    below_since: float | None = None
    stds: tuple[float, ...] | None = None
    n_joints: int | None = None

    @classmethod
    def initial(cls, cfg: CsmConfig, paused: bool = False, t: float = 0.0) -> CsmState:
        windows = {j: RollingWindow(cfg.capacity) for j in cfg.monitored_joints}
        verdict = (
            MonitorVerdict.paused_by(PauseCause.UNEXPECTED_CONTACT, since=t)
            if paused
            else MonitorVerdict.running(since=t, t=t)
        )
        return cls(windows=windows, verdict=verdict)

    @property
    def warmup(self) -> bool:
        return not all(w.full for w in self.windows.values())


def csm_step(state: CsmState, sample: TorqueSample, cfg: CsmConfig) -> tuple[CsmState, MonitorVerdict]:
    t = sample.t
    if state.last_t is not None and t < state.last_t:
        raise NonMonotonicTimestamp(t, state.last_t)
    n = len(sample.torques)
    if state.n_joints is not None and n != state.n_joints:
        raise DimensionMismatch(f"torque vector length changed from {state.n_joints} to {n}")
    for j in cfg.monitored_joints:
        if j >= n:
            raise JointIndexOutOfRange(f"joint {j} not present in {n}-joint sample")
    state.n_joints = n
    state.last_t = t

    for j in cfg.monitored_joints:
        state.windows[j].push(sample.torques[j])

    verdict = state.verdict
    if state.warmup:
        wins = state.windows.values()
        state.stds = tuple(w.std() for w in wins) if all(len(w) >= 2 for w in wins) else None
        state.verdict = replace(verdict, t=t)
        return state, state.verdict

    stds = tuple(state.windows[j].std() for j in cfg.monitored_joints)
    state.stds = stds

    if verdict.state is MonitorState.RUNNING:
        if any(s >= cfg.theta_hi for s in stds):
            state.verdict = MonitorVerdict.paused_by(PauseCause.UNEXPECTED_CONTACT, since=t)
            state.below_since = None
        else:
            state.verdict = replace(verdict, t=t)
        return state, state.verdict

    if all(s < cfg.theta_lo for s in stds):
        if state.below_since is None:
            state.below_since = t
        if t - state.below_since >= cfg.resume_dwell - _DWELL_SLACK:
            # below_since is left in place so callers can read the dwell start
            state.verdict = MonitorVerdict.running(since=t, t=t)
            return state, state.verdict
    else:
        state.below_since = None
    state.verdict = replace(verdict, t=t)
    return state, state.verdict


class ContactMonitor:
    """Stateful wrapper around :func:`csm_step`."""

    def __init__(self, cfg: CsmConfig, state: CsmState | None = None) -> None:
        self.cfg = cfg
        self.state = state or CsmState.initial(cfg)

    @property
    def verdict(self) -> MonitorVerdict:
        return self.state.verdict

    def step(self, sample: TorqueSample) -> MonitorVerdict:
        _, verdict = csm_step(self.state, sample, self.cfg)
        return verdict


@dataclass(frozen=True)
class CsmTraceRecord:
    t: float
    stds: tuple[float, ...]
    verdict: MonitorVerdict
    warmup: bool


def csm_trace(
    samples: Iterable[TorqueSample], cfg: CsmConfig, state: CsmState | None = None
) -> list[CsmTraceRecord]:
    """One record per sample: time, per-joint std, verdict, warmup flag.

    While fewer than two samples are buffered the std entries are NaN.
    """
    state = state or CsmState.initial(cfg)
    nan = (math.nan,) * len(cfg.monitored_joints)
    records = []
    for sample in samples:
        state, verdict = csm_step(state, sample, cfg)
        records.append(CsmTraceRecord(sample.t, state.stds or nan, verdict, state.warmup))
    return records


def trace_to_csv_rows(records: Sequence[CsmTraceRecord], cfg: CsmConfig) -> list[list[str]]:
    header = ["t", *(f"std_j{j}" for j in cfg.monitored_joints), "state", "warmup"]
    rows = [header]
    for r in records:
        rows.append([repr(r.t), *(repr(s) for s in r.stds), r.verdict.state.value, str(int(r.warmup))])
    return rows
