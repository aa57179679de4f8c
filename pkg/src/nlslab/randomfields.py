"""Deterministic seeded data generators: frequency-annulus fields, rough
Sobolev-decay fields, coherent wave packets, Gaussian bumps, plane waves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .field import Repr, SpectralField, from_frequency, to_physical
from .grid import Grid
from .norms import mass


@dataclass(frozen=True)
class RandomFieldSpec:
    """Seeded random data: ``kind`` is "annulus" (support lo <= |xi| <= hi,
    random phases) or "sobolev_decay" (coefficient magnitude |xi|^-(s + dim/2
    + margin), random phases). ``amplitude`` is the target L^2 norm."""

    kind: str
    amplitude: float = 1.0
    seed: int = 0
    lo: Optional[float] = None
    hi: Optional[float] = None
    s: Optional[float] = None
    margin: float = 0.01

    def __post_init__(self) -> None:
        if self.kind not in ("annulus", "sobolev_decay"):
            raise ValueError(f"unknown data kind {self.kind!r}")
        if self.kind == "annulus":
            if self.lo is None or self.hi is None or not (0 < self.lo < self.hi):
                raise ValueError("annulus needs 0 < lo < hi")
        if self.kind == "sobolev_decay" and self.s is None:
            raise ValueError("sobolev_decay needs a regularity s")

    def sample(self, grid: Grid, trial: int = 0) -> SpectralField:
        rng = np.random.default_rng([self.seed, trial])
        xi = grid.xi_norm
        if self.kind == "annulus":
            if self.hi > grid.nyquist:
                raise ValueError(f"annulus upper edge {self.hi} exceeds grid Nyquist {grid.nyquist}")
            mag = ((xi >= self.lo) & (xi <= self.hi)).astype(np.float64)
        else:
            a = self.s + grid.dim / 2.0 + self.margin
            with np.errstate(divide="ignore"):
                mag = np.power(xi, -a)
            mag[xi == 0.0] = 1.0
        phases = rng.uniform(0.0, 2.0 * np.pi, size=grid.shape)
        coeff = mag * np.exp(1j * phases)
        f = from_frequency(grid, coeff)
        return normalize_mass(f, self.amplitude)


def normalize_mass(f: SpectralField, amplitude: float) -> SpectralField:
    """Rescale so the L^2 norm equals ``amplitude`` (zero fields pass through)."""
    current = np.sqrt(mass(f))
    if current == 0.0:
        return f
    return f * (amplitude / current)


def plane_wave(grid: Grid, k: Sequence[int], amplitude: float = 1.0) -> SpectralField:
    """Single lattice mode A * exp(i k . x) with integer mode index k."""
    k = tuple(int(c) for c in k)
    if len(k) != grid.dim:
        raise ValueError(f"mode index must have {grid.dim} components")
    coeff = np.zeros(grid.shape, dtype=np.complex128)
    idx = tuple(c % grid.n for c in k)
    coeff[idx] = amplitude * grid.n ** (grid.dim / 2.0)
    return from_frequency(grid, coeff)


def annulus_packet(grid: Grid, lo: float, hi: float, amplitude: float = 1.0) -> SpectralField:
    """Coherent (constant-phase) data supported on lo <= |xi| <= hi: a wave
    packet concentrated at the origin."""
    mask = ((grid.xi_norm >= lo) & (grid.xi_norm <= hi)).astype(np.float64)
    if not mask.any():
        raise ValueError(f"no lattice modes in annulus [{lo}, {hi}]")
    return normalize_mass(from_frequency(grid, mask.astype(np.complex128)), amplitude)


def cap_packet(
    grid: Grid, center: Sequence[float], radius: float, amplitude: float = 1.0
) -> SpectralField:
    """Coherent data supported on a frequency ball |xi - center| <= radius: a
    wave packet traveling at group velocity 2 * center."""
    center = np.asarray(center, dtype=np.float64)
    if center.shape != (grid.dim,):
        raise ValueError(f"center must have {grid.dim} components")
    dist_sq = np.zeros(grid.shape)
    for ax in range(grid.dim):
        dist_sq = dist_sq + (grid.xi_mesh[ax] - center[ax]) ** 2
    mask = (dist_sq <= radius**2).astype(np.float64)
    if not mask.any():
        raise ValueError("no lattice modes inside the frequency cap")
    return normalize_mass(from_frequency(grid, mask.astype(np.complex128)), amplitude)


def gaussian_bump(
    grid: Grid,
    width: float = 1.0,
    amplitude: float = 1.0,
    center: Optional[Sequence[float]] = None,
) -> SpectralField:
    """Centered Gaussian exp(-|x - c|^2 / (2 width^2)), normalized to L^2 norm
    ``amplitude``; placed at the box center by default."""
    if center is None:
        center = [grid.box_length / 2.0] * grid.dim
    r_sq = np.zeros(grid.shape)
    for ax in range(grid.dim):
        r_sq = r_sq + (grid.x_mesh[ax] - center[ax]) ** 2
    vals = np.exp(-r_sq / (2.0 * width**2)).astype(np.complex128)
    return normalize_mass(SpectralField(grid, vals, Repr.PHYSICAL), amplitude)
