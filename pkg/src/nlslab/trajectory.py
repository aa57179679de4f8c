"""Time-ordered field snapshots plus per-step scalar diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .field import SpectralField

CHANNELS = ("mass", "energy", "energy_Iu", "l4x", "hs", "h_half")


@dataclass
class DiagnosticSeries:
    """Named scalar time series sampled on a common time axis."""

    times: np.ndarray
    channels: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.float64)
        for name, values in self.channels.items():
            values = np.asarray(values, dtype=np.float64)
            if values.shape != self.times.shape:
                raise ValueError(f"channel {name!r} length {values.shape} != times {self.times.shape}")
            self.channels[name] = values


@dataclass
class Trajectory:
    """Snapshots of the evolving field, every ``snapshot_stride`` steps, plus a
    finer DiagnosticSeries recorded every step."""

    times: np.ndarray
    snapshots: list[SpectralField]
    config: Optional[object] = None  # SolverConfig; untyped to avoid an import cycle
    series: Optional[DiagnosticSeries] = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.float64)
        if len(self.snapshots) != self.times.size:
            raise ValueError("one snapshot per time stamp required")
        if self.times.size and self.times[0] != 0.0:
            raise ValueError("times must start at 0")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        grids = {f.grid for f in self.snapshots}
        if len(grids) > 1:
            raise ValueError("snapshots must share one grid")

    @property
    def grid(self):
        return self.snapshots[0].grid

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def window(self, interval: tuple[float, float]) -> tuple[np.ndarray, list[SpectralField]]:
        """Snapshot times and fields with t in [t1, t2] (small float slack)."""
        t1, t2 = interval
        if t1 > t2:
            raise ValueError("interval endpoints out of order")
        tol = 1e-12 * max(1.0, abs(self.t_end))
        if t1 < self.times[0] - tol or t2 > self.times[-1] + tol:
            raise ValueError(f"interval [{t1}, {t2}] outside trajectory span [0, {self.t_end}]")
        mask = (self.times >= t1 - tol) & (self.times <= t2 + tol)
        idx = np.nonzero(mask)[0]
        return self.times[idx], [self.snapshots[i] for i in idx]


@dataclass
class DuhamelSplit:
    """Decomposition of a trajectory into the free evolution of its data and
    the remainder, on identical time stamps."""

    linear_part: Trajectory
    nonlinear_part: Trajectory

    def __post_init__(self) -> None:
        if not np.array_equal(self.linear_part.times, self.nonlinear_part.times):
            raise ValueError("split parts must share time stamps")
