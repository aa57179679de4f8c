"""Power-law fitting on log-log axes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    constant: float
    stderr: float


def fit_power_law(points: Sequence[tuple[float, float]]) -> PowerLawFit:
    """Least squares of log y against log x: returns the slope (exponent), the
    exponentiated intercept (constant), and the slope's standard error.

    Requires >= 3 points with distinct positive x; points with y <= 0 are
    rejected with a report of the offenders.
    """
    if len(points) < 3:
        raise ValueError(f"need >= 3 points to fit, got {len(points)}")
    bad = [(x, y) for x, y in points if not y > 0]
    if bad:
        raise ValueError(f"nonpositive y values cannot be fit on log axes: {bad}")
    if any(not x > 0 for x, _ in points):
        raise ValueError("x values must be positive")
    xs = [math.log(x) for x, _ in points]
    if len(set(xs)) < 2:
        raise ValueError("x values must not all coincide")
    ys = [math.log(y) for _, y in points]

    n = len(points)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    residual = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    stderr = math.sqrt(residual / (n - 2) / sxx) if n > 2 else 0.0
    return PowerLawFit(exponent=slope, constant=math.exp(intercept), stderr=stderr)
