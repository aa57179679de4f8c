"""Norms and functionals: mass, energy, tapered energy, Sobolev norms, mixed
space-time Lebesgue norms over admissible exponent pairs, and measured
inequality sides (energy increment, interaction-Morawetz ratio)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .field import SpectralField, as_frequency, as_physical
from .multipliers import Multiplier, apply_multiplier
from .trajectory import Trajectory

INF = math.inf


def mass(f: SpectralField) -> float:
    """Integral of |u|^2 over the box (identical in either representation)."""
    return float(f.grid.cell_volume * np.sum(np.abs(f.values) ** 2))


def spatial_lq(f: SpectralField, q: float) -> float:
    """Spatial L^q norm, cell_volume-weighted; q = inf gives the sup norm."""
    if q < 1:
        raise ValueError("q must be >= 1")
    u = np.abs(as_physical(f).values)
    if q == INF:
        return float(u.max()) if u.size else 0.0
    return float((f.grid.cell_volume * np.sum(u**q)) ** (1.0 / q))


def kinetic_energy(f: SpectralField) -> float:
    fhat = as_frequency(f)
    return float(0.5 * f.grid.cell_volume * np.sum(f.grid.xi_sq * np.abs(fhat.values) ** 2))


def potential_energy(f: SpectralField) -> float:
    u = as_physical(f)
    return float(0.25 * f.grid.cell_volume * np.sum(np.abs(u.values) ** 4))


def energy(f: SpectralField) -> float:
    """(1/2) integral |grad u|^2 + (1/4) integral |u|^4."""
    return kinetic_energy(f) + potential_energy(f)


def modified_energy(f: SpectralField, N: float, s: float) -> float:
    """Energy of the tapered field: identity below frequency N, (N/|xi|)^(1-s) decay above 2N."""
    return energy(apply_multiplier(f, Multiplier.i_operator(N, s)))


def sobolev_norm(f: SpectralField, s: float, homogeneous: bool = False) -> float:
    """H^s norm with weight (1+|xi|^2)^s, or homogeneous weight |xi|^(2s)."""
    fhat = as_frequency(f)
    if homogeneous:
        with np.errstate(divide="ignore"):
            w = np.power(f.grid.xi_sq, s)
        w[f.grid.xi_sq == 0.0] = 0.0 if s > 0 else 1.0
    else:
        w = np.power(1.0 + f.grid.xi_sq, s)
    return float(np.sqrt(f.grid.cell_volume * np.sum(w * np.abs(fhat.values) ** 2)))


def dual_exponent(p: float) -> float:
    if p == INF:
        return 1.0
    if p == 1:
        return INF
    return p / (p - 1.0)


def is_admissible(p: float, q: float, dim: int = 3) -> bool:
    """Dispersive scaling relation 2/p = dim*(1/2 - 1/q), with p, q >= 2."""
    if p < 2 or q < 2:
        return False
    lhs = 0.0 if p == INF else 2.0 / p
    rhs = dim * (0.5 - (0.0 if q == INF else 1.0 / q))
    return abs(lhs - rhs) < 1e-12


def default_pair_set(dim: int = 3) -> tuple[tuple[float, float], ...]:
    """Finite admissible-pair sample used for the supremum-type space-time norm."""
    if dim == 3:
        return ((INF, 2.0), (2.0, 6.0), (4.0, 3.0), (6.0, 18.0 / 7.0), (10.0, 30.0 / 13.0))
    if dim == 2:
        return ((INF, 2.0), (3.0, 6.0), (4.0, 4.0), (6.0, 3.0), (8.0, 8.0 / 3.0))
    if dim == 1:
        return ((INF, 2.0), (4.0, INF), (6.0, 6.0), (8.0, 4.0), (12.0, 3.0))
    raise ValueError(f"dim must be in {{1, 2, 3}}, got {dim}")


@dataclass(frozen=True)
class NormSpec:
    """Mixed L^p_t L^q_x norm specification with optional per-snapshot
    pre-multipliers and derivative."""

    p: float
    q: float
    derivative: Optional[str] = None  # None | "grad" | "frac" | "bessel"
    order: Optional[float] = None  # for "frac" / "bessel"
    pre_multiplier: Union[Multiplier, Sequence[Multiplier], None] = None

    def __post_init__(self) -> None:
        if self.p < 1 or self.q < 1:
            raise ValueError("exponents must be >= 1")
        if self.derivative not in (None, "grad", "frac", "bessel"):
            raise ValueError(f"unknown derivative kind {self.derivative!r}")
        if self.derivative in ("frac", "bessel") and self.order is None:
            raise ValueError("derivative order required")

    def pre_multipliers(self) -> tuple[Multiplier, ...]:
        if self.pre_multiplier is None:
            return ()
        if isinstance(self.pre_multiplier, Multiplier):
            return (self.pre_multiplier,)
        return tuple(self.pre_multiplier)


def _snapshot_spatial_norm(f: SpectralField, spec: NormSpec) -> float:
    g = f
    for m in spec.pre_multipliers():
        g = apply_multiplier(g, m)
    if spec.derivative is None:
        return spatial_lq(g, spec.q)
    if spec.derivative == "grad":
        parts = [np.abs(as_physical(apply_multiplier(g, Multiplier.gradient(ax))).values) ** 2
                 for ax in range(f.grid.dim)]
        magnitude = np.sqrt(np.sum(parts, axis=0))
        if spec.q == INF:
            return float(magnitude.max())
        return float((f.grid.cell_volume * np.sum(magnitude**spec.q)) ** (1.0 / spec.q))
    kind = Multiplier.frac_deriv(spec.order) if spec.derivative == "frac" else Multiplier.bessel(spec.order)
    return spatial_lq(apply_multiplier(g, kind), spec.q)


def mixed_norm(traj: Trajectory, spec: NormSpec, interval: tuple[float, float]) -> float:
    """L^p in time (trapezoid on the snapshot grid) of the spatial L^q norm."""
    times, snaps = traj.window(interval)
    vals = np.array([_snapshot_spatial_norm(f, spec) for f in snaps])
    if spec.p == INF:
        return float(vals.max()) if vals.size else 0.0
    if times.size == 1:
        return 0.0
    return float(np.trapezoid(vals**spec.p, times) ** (1.0 / spec.p))


def s0_norm(
    traj: Trajectory,
    interval: tuple[float, float],
    pair_set: Sequence[tuple[float, float]],
    derivative: Optional[str] = None,
    order: Optional[float] = None,
    pre_multiplier: Union[Multiplier, Sequence[Multiplier], None] = None,
) -> float:
    """Max of mixed_norm over a finite admissible-pair sample (lower bound of
    the supremum over all admissible pairs)."""
    dim = traj.grid.dim
    for p, q in pair_set:
        if not is_admissible(p, q, dim):
            raise ValueError(f"pair ({p}, {q}) is not admissible in dimension {dim}")
    return max(
        mixed_norm(traj, NormSpec(p, q, derivative, order, pre_multiplier), interval)
        for p, q in pair_set
    )


def energy_increment(traj: Trajectory, N: float, s: float, interval: tuple[float, float]) -> float:
    """sup over snapshot pairs in the interval of |E_tapered(t1) - E_tapered(t2)|."""
    _, snaps = traj.window(interval)
    vals = [modified_energy(f, N, s) for f in snaps]
    return float(max(vals) - min(vals))


def morawetz_ratio(traj: Trajectory, interval: tuple[float, float]) -> tuple[float, float, float]:
    """Measured sides of the interaction-Morawetz-type inequality:
    lhs = ||u||_{L^4_{t,x}}^4, rhs = sup_t mass * (sup_t homogeneous H^{1/2})^2."""
    times, snaps = traj.window(interval)
    l4 = np.array([spatial_lq(f, 4.0) for f in snaps])
    lhs = float(np.trapezoid(l4**4, times)) if times.size > 1 else 0.0
    sup_mass = max(mass(f) for f in snaps)
    sup_hhalf = max(sobolev_norm(f, 0.5, homogeneous=True) for f in snaps)
    rhs = sup_mass * sup_hhalf**2
    if rhs == 0.0:
        raise ValueError("inequality right side vanishes (zero field)")
    return lhs, rhs, lhs / rhs
