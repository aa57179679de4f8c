"""Fourier multiplier operators: smooth cutoffs, dyadic blocks, the smoothing
taper that maps H^s data into H^1, fractional derivatives, and the free
Schroedinger propagator.

All operators act by pointwise multiplication of frequency coefficients and
therefore commute with one another.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .field import Repr, SpectralField, as_frequency, to_physical
from .grid import Grid

__all__ = [
    "cutoff_phi",
    "symbol_m",
    "Multiplier",
    "apply_multiplier",
    "lp_block",
    "frac_derivative",
    "gradient",
]


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity monotone step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t)."""
    t = np.asarray(t, dtype=np.float64)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(t > 0.0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        b = np.where(t < 1.0, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    out = a / (a + b)
    return np.where(t <= 0.0, 0.0, np.where(t >= 1.0, 1.0, out))


def cutoff_phi(r):
    """Radial low-pass profile: 1 on [0, 1], 0 on [2, inf), smooth and
    nonincreasing on (1, 2)."""
    r = np.asarray(r, dtype=np.float64)
    out = 1.0 - _smooth_step(r - 1.0)
    return out if out.ndim else float(out)


def symbol_m(xi_norm, N: float, s: float):
    """Smoothing-taper symbol: 1 for |xi| <= N, (N/|xi|)^(1-s) for |xi| >= 2N,
    log-smooth monotone interpolation on (N, 2N). Values lie in (0, 1]."""
    if not (N > 0):
        raise ValueError(f"N must be positive, got {N}")
    if not (0.5 < s < 1.0):
        raise ValueError(f"s must satisfy s in (1/2, 1), got {s}")
    r = np.asarray(xi_norm, dtype=np.float64) / N
    high = np.power(np.maximum(r, 1.0), -(1.0 - s))
    # between N and 2N: exp(step * ln 2^{-(1-s)}), hitting both branch endpoints
    mid = np.exp(_smooth_step(r - 1.0) * (-(1.0 - s) * np.log(2.0)))
    out = np.where(r <= 1.0, 1.0, np.where(r >= 2.0, high, mid))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Multiplier:
    """Specification of a pointwise frequency multiplier.

    Use the classmethod constructors; ``symbol(grid)`` evaluates the symbol on
    the grid's frequency lattice.
    """

    kind: str
    N: Optional[float] = None
    s: Optional[float] = None
    order: Optional[float] = None
    axis: Optional[int] = None
    t: Optional[float] = None

    @classmethod
    def cutoff_low(cls, N: float) -> "Multiplier":
        if not N > 0:
            raise ValueError("cutoff threshold must be positive")
        return cls("cutoff_low", N=float(N))

    @classmethod
    def cutoff_high(cls, N: float) -> "Multiplier":
        if not N > 0:
            raise ValueError("cutoff threshold must be positive")
        return cls("cutoff_high", N=float(N))

    @classmethod
    def lp_block(cls, N: float) -> "Multiplier":
        if not N > 0:
            raise ValueError("block frequency must be positive")
        return cls("lp_block", N=float(N))

    @classmethod
    def i_operator(cls, N: float, s: float) -> "Multiplier":
        if not N > 0:
            raise ValueError("taper threshold must be positive")
        if not (0.5 < s < 1.0):
            raise ValueError(f"s must satisfy s in (1/2, 1), got {s}")
        return cls("i_operator", N=float(N), s=float(s))

    @classmethod
    def frac_deriv(cls, order: float) -> "Multiplier":
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        return cls("frac_deriv", order=float(order))

    @classmethod
    def bessel(cls, s: float) -> "Multiplier":
        """Inhomogeneous weight (1 + |xi|^2)^(s/2)."""
        return cls("bessel", order=float(s))

    @classmethod
    def gradient(cls, axis: int) -> "Multiplier":
        return cls("gradient", axis=int(axis))

    @classmethod
    def free_propagator(cls, t: float) -> "Multiplier":
        return cls("free_propagator", t=float(t))

    def symbol(self, grid: Grid) -> np.ndarray:
        xi = grid.xi_norm
        if self.kind == "cutoff_low":
            return cutoff_phi(xi / self.N)
        if self.kind == "cutoff_high":
            return 1.0 - cutoff_phi(xi / self.N)
        if self.kind == "lp_block":
            return cutoff_phi(xi / (2.0 * self.N)) - cutoff_phi(xi / self.N)
        if self.kind == "i_operator":
            return symbol_m(xi, self.N, self.s)
        if self.kind == "frac_deriv":
            if self.order == 0.0:
                return np.ones(grid.shape)
            with np.errstate(divide="ignore"):
                out = np.power(xi, self.order)
            out[xi == 0.0] = 0.0
            return out
        if self.kind == "bessel":
            return np.power(1.0 + grid.xi_sq, self.order / 2.0)
        if self.kind == "gradient":
            if not 0 <= self.axis < grid.dim:
                raise ValueError(f"axis {self.axis} out of range for dim {grid.dim}")
            return 1j * grid.xi_mesh[self.axis]
        if self.kind == "free_propagator":
            return np.exp(-1j * self.t * grid.xi_sq)
        raise ValueError(f"unknown multiplier kind {self.kind!r}")


def apply_multiplier(f: SpectralField, m: Multiplier) -> SpectralField:
    """Multiply frequency coefficients by the symbol; result is returned in the
    caller's representation."""
    fhat = as_frequency(f)
    out = SpectralField(f.grid, fhat.values * m.symbol(f.grid), Repr.FREQUENCY)
    return out if f.repr is Repr.FREQUENCY else to_physical(out)


def lp_block(f: SpectralField, N: float) -> SpectralField:
    """Dyadic frequency block: low-pass at 2N minus low-pass at N."""
    return apply_multiplier(f, Multiplier.lp_block(N))


def frac_derivative(f: SpectralField, order: float) -> SpectralField:
    """|nabla|^order via the |xi|^order symbol (zero mode annihilated for order > 0)."""
    return apply_multiplier(f, Multiplier.frac_deriv(order))


def gradient(f: SpectralField) -> tuple[SpectralField, ...]:
    """Full gradient: one field per axis, symbol i*xi_axis."""
    return tuple(apply_multiplier(f, Multiplier.gradient(ax)) for ax in range(f.grid.dim))
