"""Complex lattice functions tagged by representation, with unitary transforms."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .grid import Grid


class Repr(enum.Enum):
    PHYSICAL = "physical"
    FREQUENCY = "frequency"


@dataclass(frozen=True)
class SpectralField:
    """A complex-valued function on a Grid, in physical or frequency representation.

    Transforms use the unitary DFT normalization (1/sqrt(n^dim) both ways), so the
    l2 sum of ``values`` is representation-independent and physical integrals are
    cell_volume-weighted sums.
    """

    grid: Grid
    values: np.ndarray
    repr: Repr

    def __post_init__(self) -> None:
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values shape {self.values.shape} != grid shape {self.grid.shape}")
        if not np.iscomplexobj(self.values):
            object.__setattr__(self, "values", self.values.astype(np.complex128))

    def with_values(self, values: np.ndarray) -> "SpectralField":
        return SpectralField(self.grid, values, self.repr)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_compatible(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_compatible(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, c: complex) -> "SpectralField":
        return self.with_values(self.values * c)

    __rmul__ = __mul__

    def _check_compatible(self, other: "SpectralField") -> None:
        if self.grid != other.grid:
            raise ValueError("fields live on different grids")
        if self.repr is not other.repr:
            raise ValueError("fields are in different representations")


def zeros(grid: Grid, repr: Repr = Repr.PHYSICAL) -> SpectralField:
    return SpectralField(grid, np.zeros(grid.shape, dtype=np.complex128), repr)


def from_physical(grid: Grid, values: np.ndarray) -> SpectralField:
    return SpectralField(grid, np.asarray(values, dtype=np.complex128), Repr.PHYSICAL)


def from_frequency(grid: Grid, values: np.ndarray) -> SpectralField:
    return SpectralField(grid, np.asarray(values, dtype=np.complex128), Repr.FREQUENCY)


def to_frequency(f: SpectralField) -> SpectralField:
    """Forward unitary DFT. Input must be in physical representation."""
    if f.repr is not Repr.PHYSICAL:
        raise ValueError("to_frequency expects a physical-space field")
    return SpectralField(f.grid, np.fft.fftn(f.values, norm="ortho"), Repr.FREQUENCY)


def to_physical(f: SpectralField) -> SpectralField:
    """Inverse unitary DFT. Input must be in frequency representation."""
    if f.repr is not Repr.FREQUENCY:
        raise ValueError("to_physical expects a frequency-space field")
    return SpectralField(f.grid, np.fft.ifftn(f.values, norm="ortho"), Repr.PHYSICAL)


def as_frequency(f: SpectralField) -> SpectralField:
    """Return f in frequency representation, transforming if needed."""
    return f if f.repr is Repr.FREQUENCY else to_frequency(f)


def as_physical(f: SpectralField) -> SpectralField:
    """Return f in physical representation, transforming if needed."""
    return f if f.repr is Repr.PHYSICAL else to_physical(f)
