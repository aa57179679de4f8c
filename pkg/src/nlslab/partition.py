"""Greedy decomposition of a time window into subintervals with bounded
space-time L^4 mass, with an optional second grouping layer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .trajectory import Trajectory


@dataclass
class IntervalPartition:
    """Breakpoints of a time window; every little interval carries its measured
    space-time L^4 norm. ``big_breakpoints``, when present, group the little
    intervals and must be a subset of ``breakpoints``."""

    breakpoints: np.ndarray
    interval_l4: np.ndarray
    epsilon: float
    over_budget: list[int] = field(default_factory=list)
    big_breakpoints: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.breakpoints = np.asarray(self.breakpoints, dtype=np.float64)
        self.interval_l4 = np.asarray(self.interval_l4, dtype=np.float64)
        if self.breakpoints.size != self.interval_l4.size + 1:
            raise ValueError("need one more breakpoint than interval")
        if not np.all(np.diff(self.breakpoints) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if self.big_breakpoints is not None:
            self.big_breakpoints = np.asarray(self.big_breakpoints, dtype=np.float64)
            little = set(self.breakpoints.tolist())
            if not set(self.big_breakpoints.tolist()) <= little:
                raise ValueError("big breakpoints must refine into little breakpoints")

    @property
    def n_intervals(self) -> int:
        return self.interval_l4.size

    @property
    def n_big(self) -> Optional[int]:
        return None if self.big_breakpoints is None else self.big_breakpoints.size - 1

    def intervals(self) -> list[tuple[float, float]]:
        return list(zip(self.breakpoints[:-1], self.breakpoints[1:]))


def _l4_density(traj: Trajectory, interval: tuple[float, float]) -> tuple[np.ndarray, np.ndarray]:
    """Times and ||u(t)||_{L^4_x}^4 samples inside the interval, preferring the
    per-step diagnostic channel over the snapshot grid."""
    if traj.series is not None and "l4x" in traj.series.channels:
        times = traj.series.times
        dens = traj.series.channels["l4x"] ** 4
    else:
        from .norms import spatial_lq

        times = traj.times
        dens = np.array([spatial_lq(f, 4.0) ** 4 for f in traj.snapshots])
    t1, t2 = interval
    tol = 1e-12 * max(1.0, abs(times[-1]))
    mask = (times >= t1 - tol) & (times <= t2 + tol)
    if not mask.any():
        raise ValueError("interval contains no sample times")
    return times[mask], dens[mask]


def partition_by_l4(
    traj: Trajectory, epsilon: float, interval: Optional[tuple[float, float]] = None
) -> IntervalPartition:
    """Greedy left-to-right cut whenever the running integral of ||u||_{L^4_x}^4
    reaches epsilon^4. Every interval meets the budget up to quadrature
    tolerance; a single step exceeding the budget on its own becomes a
    flagged singleton."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if interval is None:
        interval = (0.0, traj.t_end)
    times, dens = _l4_density(traj, interval)
    budget = epsilon**4
    slack = 1e-12 * max(budget, 1.0)

    breakpoints = [times[0]]
    interval_mass: list[float] = []
    over_budget: list[int] = []
    cum = 0.0
    steps_in_interval = 0
    for i in range(times.size - 1):
        contrib = 0.5 * (dens[i] + dens[i + 1]) * (times[i + 1] - times[i])
        cum += contrib
        steps_in_interval += 1
        if cum >= budget - slack:
            # cut on reaching the budget; overshoot is below one step's mass
            breakpoints.append(times[i + 1])
            interval_mass.append(cum)
            if steps_in_interval == 1 and cum > budget + slack:
                over_budget.append(len(interval_mass) - 1)
            cum = 0.0
            steps_in_interval = 0
    if breakpoints[-1] != times[-1]:
        breakpoints.append(times[-1])
        interval_mass.append(cum)

    return IntervalPartition(
        breakpoints=np.asarray(breakpoints),
        interval_l4=np.asarray(interval_mass) ** 0.25,
        epsilon=epsilon,
        over_budget=over_budget,
    )


def double_layer_partition(
    traj: Trajectory,
    epsilon: float,
    little_per_big: int,
    interval: Optional[tuple[float, float]] = None,
) -> IntervalPartition:
    """Group the greedy little intervals into big intervals of
    ``little_per_big`` each (the last group may be partial)."""
    if little_per_big < 1:
        raise ValueError("little_per_big must be >= 1")
    part = partition_by_l4(traj, epsilon, interval)
    bps = part.breakpoints
    big = list(bps[0:-1:little_per_big])
    if big[-1] != bps[-1]:
        big.append(bps[-1])
    part.big_breakpoints = np.asarray(big)
    return part
