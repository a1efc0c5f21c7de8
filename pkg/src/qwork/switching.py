"""Pulse-train switching functions g(t) and their running integral G(t)."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class SwitchingFunction:
    """Piecewise-constant pulse train.

    In every period ``[m p, (m + 1) p)`` the coupling is on (value
    ``amplitude``) for ``t - m p <= on_fraction * p`` and off afterwards.
    Beyond ``duration`` the coupling is off. The default is the train used
    throughout the two-level figures: on for ``0 <= t <= 1``, off for
    ``1 < t <= 2``, repeated four times.

    Note that this default has ``g(0) = 1``; the pulse train is taken
    literally rather than imposing a vanishing initial value.
    """

    period: float = 2.0
    on_fraction: float = 0.5
    duration: float = 8.0
    amplitude: float = 1.0

    def __post_init__(self):
        if not (self.period > 0 and math.isfinite(self.period)):
            raise ValueError(f"switching.period must be positive, got {self.period}")
        if not (0 < self.on_fraction <= 1):
            raise ValueError(f"switching.on_fraction must lie in (0, 1], got {self.on_fraction}")
        if not (self.duration >= 0 and math.isfinite(self.duration)):
            raise ValueError(f"switching.duration must be non-negative, got {self.duration}")
        ratio = self.duration / self.period
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError("switching.duration must be an integer multiple of switching.period")
        if not math.isfinite(self.amplitude):
            raise ValueError("switching.amplitude must be finite")

    @classmethod
    def constant(cls, duration: float, amplitude: float = 1.0) -> "SwitchingFunction":
        """Single rectangular pulse ``amplitude * Theta(t) Theta(duration - t)``."""
        return cls(period=duration, on_fraction=1.0, duration=duration, amplitude=amplitude)

    @property
    def n_periods(self) -> int:
        return int(round(self.duration / self.period))

    @property
    def on_time(self) -> float:
        return self.on_fraction * self.period

    def g(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("switching function is defined for t >= 0 only")
        idx = np.floor(t / self.period)
        phase = t - idx * self.period
        on = (phase <= self.on_time) & (idx < self.n_periods) & (t <= self.duration)
        out = np.where(on, self.amplitude, 0.0)
        return float(out) if out.ndim == 0 else out

    def G(self, t):
        """Running pulse area ``int_0^t g``, in closed form."""
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("switching function is defined for t >= 0 only")
        tc = np.minimum(t, self.duration)
        idx = np.floor(tc / self.period)
        phase = tc - idx * self.period
        out = self.amplitude * (idx * self.on_time + np.minimum(phase, self.on_time))
        return float(out) if out.ndim == 0 else out

    def edges(self, t0: float = 0.0, t1: float | None = None) -> np.ndarray:
        """Pulse switch-on/off times inside ``[t0, t1]``."""
        t1 = self.duration if t1 is None else t1
        starts = self.period * np.arange(self.n_periods)
        all_edges = np.concatenate([starts, starts + self.on_time])
        all_edges = np.unique(np.append(all_edges[all_edges <= self.duration], self.duration))
        return all_edges[(all_edges >= t0) & (all_edges <= t1)]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SwitchingFunction":
        return cls(**{k: float(d[k]) for k in ("period", "on_fraction", "duration", "amplitude") if k in d})


def g(sw: SwitchingFunction, t):
    return sw.g(t)


def G(sw: SwitchingFunction, t):
    return sw.G(t)
