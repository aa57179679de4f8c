"""Pseudo-spectral simulator and measurement lab for the defocusing cubic
Schroedinger equation on periodic boxes."""

from .checkpoint import load_checkpoint, save_checkpoint
from .field import Repr, SpectralField, as_frequency, as_physical, from_frequency, from_physical, to_frequency, to_physical, zeros
from .fitting import PowerLawFit, fit_power_law
from .grid import Grid, make_grid
from .multipliers import Multiplier, apply_multiplier, cutoff_phi, frac_derivative, gradient, lp_block, symbol_m
from .norms import (
    NormSpec,
    default_pair_set,
    dual_exponent,
    energy,
    energy_increment,
    is_admissible,
    mass,
    mixed_norm,
    modified_energy,
    morawetz_ratio,
    s0_norm,
    sobolev_norm,
    spatial_lq,
)
from .partition import IntervalPartition, double_layer_partition, partition_by_l4
from .randomfields import RandomFieldSpec, annulus_packet, cap_packet, gaussian_bump, plane_wave
from .report import EstimateReport, SweepPoint
from .solver import (
    DivergenceError,
    MaxIterExceededError,
    NonContractionError,
    SolverConfig,
    choose_lambda,
    duhamel_split,
    evolve,
    free_evolve,
    nonlinear_phase_step,
    picard_solve,
    rescale,
    strang_step,
)
from .trajectory import DiagnosticSeries, DuhamelSplit, Trajectory

__version__ = "0.1.0"
