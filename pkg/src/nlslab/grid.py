"""Periodic lattice descriptor and its frequency lattice."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Periodic box discretization: ``n`` points per axis on a torus of period ``box_length``.

    Wave vectors are xi = (2*pi/box_length) * k with integer k in [-n/2, n/2),
    stored in FFT order.
    """

    dim: int
    n: int
    box_length: float

    def __post_init__(self) -> None:
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be in {{1, 2, 3}}, got {self.dim}")
        if not _is_power_of_two(self.n) or self.n < 8:
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        if not (self.box_length > 0 and np.isfinite(self.box_length)):
            raise ValueError(f"box_length must be positive and finite, got {self.box_length}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        return self.n**self.dim

    @property
    def spacing(self) -> float:
        return self.box_length / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def volume(self) -> float:
        return self.box_length**self.dim

    @property
    def nyquist(self) -> float:
        """Largest axis frequency magnitude, (2*pi/L) * (n/2)."""
        return (2.0 * np.pi / self.box_length) * (self.n / 2)

    @property
    def xi_max(self) -> float:
        """Largest |xi| on the lattice (the corner mode), nyquist * sqrt(dim)."""
        return self.nyquist * np.sqrt(self.dim)

    @cached_property
    def xi_axes(self) -> tuple[np.ndarray, ...]:
        """1-d wave-number arrays per axis, FFT order."""
        xi = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)
        return (xi,) * self.dim

    @cached_property
    def xi_mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.xi_axes, indexing="ij"))

    @cached_property
    def xi_sq(self) -> np.ndarray:
        """|xi|^2 on the full lattice."""
        out = np.zeros(self.shape)
        for comp in self.xi_mesh:
            out += comp**2
        return out

    @cached_property
    def xi_norm(self) -> np.ndarray:
        return np.sqrt(self.xi_sq)

    @cached_property
    def x_axes(self) -> tuple[np.ndarray, ...]:
        x = np.arange(self.n) * self.spacing
        return (x,) * self.dim

    @cached_property
    def x_mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.x_axes, indexing="ij"))


def make_grid(dim: int, n: int, box_length: float) -> Grid:
    """Construct a validated Grid."""
    return Grid(dim=int(dim), n=int(n), box_length=float(box_length))
