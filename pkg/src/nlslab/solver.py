"""Split-step time evolution of the defocusing cubic Schroedinger equation
i u_t + Laplace u = |u|^2 u on a periodic box, plus the Duhamel fixed-point
solver, the linear/nonlinear trajectory decomposition, and the scaling map."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .field import Repr, SpectralField, as_frequency, as_physical, to_physical
from .grid import Grid
from .multipliers import Multiplier
from .trajectory import DiagnosticSeries, DuhamelSplit, Trajectory

# Nonlinear phase rotation allowed per step; larger steps are rejected.
PHASE_ROTATION_CAP = 0.1
# Sup-norm growth factor that triggers the instability guard.
DIVERGENCE_FACTOR = 1e6


class DivergenceError(RuntimeError):
    """Sup norm exceeded the overflow guard: numerical instability, not blow-up."""


class NonContractionError(RuntimeError):
    """Duhamel iteration distances grew for three consecutive iterations."""


class MaxIterExceededError(RuntimeError):
    """Duhamel iteration failed to reach tolerance within max_iter."""


@dataclass(frozen=True)
class SolverConfig:
    grid: Grid
    dt: float
    t_end: float
    snapshot_stride: int = 1
    nonlinearity_on: bool = True
    s: float = 0.75
    N: float = 16.0
    epsilon: float = 0.1

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end < self.dt:
            raise ValueError("t_end must be >= dt")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")
        if not (0.5 < self.s < 1.0):
            raise ValueError(f"s must satisfy s in (1/2, 1), got {self.s}")
        if not self.N > 0:
            raise ValueError("N must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    @property
    def taper_is_identity(self) -> bool:
        """True when N reaches the lattice corner frequency, so the taper
        symbol is 1 at every mode."""
        return self.N >= self.grid.xi_max


def free_evolve(f: SpectralField, t: float) -> SpectralField:
    """Exact free propagator: frequency coefficients rotated by exp(-i t |xi|^2)."""
    if t == 0.0:
        return f
    fhat = as_frequency(f)
    out = SpectralField(f.grid, fhat.values * np.exp(-1j * t * f.grid.xi_sq), Repr.FREQUENCY)
    return out if f.repr is Repr.FREQUENCY else to_physical(out)


def nonlinear_phase_step(f: SpectralField, dt: float) -> SpectralField:
    """Exact solution of the nonlinear sub-flow i u_t = |u|^2 u over dt:
    pointwise u <- u * exp(-i dt |u|^2), preserving |u| pointwise."""
    if f.repr is not Repr.PHYSICAL:
        raise ValueError("nonlinear_phase_step expects a physical-space field")
    u = f.values
    return f.with_values(u * np.exp(-1j * dt * np.abs(u) ** 2))


def strang_step(f: SpectralField, dt: float, nonlinear: bool = True) -> SpectralField:
    """Second-order splitting: half free flow, full nonlinear phase, half free flow.
    With the nonlinearity disabled this is exactly the free flow over dt."""
    if not nonlinear:
        return free_evolve(f, dt)
    half = free_evolve(f, 0.5 * dt)
    mid = nonlinear_phase_step(as_physical(half), dt)
    out = free_evolve(mid, 0.5 * dt)
    return out if f.repr is Repr.PHYSICAL else as_frequency(out)


def _channel_sample(uhat: np.ndarray, u_phys: np.ndarray, grid: Grid, cfg: SolverConfig,
                    taper_sym: np.ndarray) -> dict[str, float]:
    cv = grid.cell_volume
    m = float(cv * np.sum(np.abs(uhat) ** 2))
    kin = float(0.5 * cv * np.sum(grid.xi_sq * np.abs(uhat) ** 2))
    pot = float(0.25 * cv * np.sum(np.abs(u_phys) ** 4))
    tap_hat = uhat * taper_sym
    tap_phys = np.fft.ifftn(tap_hat, norm="ortho")
    kin_i = float(0.5 * cv * np.sum(grid.xi_sq * np.abs(tap_hat) ** 2))
    pot_i = float(0.25 * cv * np.sum(np.abs(tap_phys) ** 4))
    l4 = float((cv * np.sum(np.abs(u_phys) ** 4)) ** 0.25)
    hs = float(np.sqrt(cv * np.sum((1.0 + grid.xi_sq) ** cfg.s * np.abs(uhat) ** 2)))
    h_half = float(np.sqrt(cv * np.sum(grid.xi_norm * np.abs(uhat) ** 2)))
    return {
        "mass": m,
        "energy": kin + pot,
        "energy_Iu": kin_i + pot_i,
        "l4x": l4,
        "hs": hs,
        "h_half": h_half,
    }


def evolve(config: SolverConfig, u0: SpectralField) -> Trajectory:
    """Integrate the equation by Strang splitting; snapshots every
    snapshot_stride steps (plus the final time), scalar channels every step."""
    if u0.grid != config.grid:
        raise ValueError("initial data lives on a different grid")
    grid = config.grid
    uhat = as_frequency(u0).values.copy()
    u_phys = np.fft.ifftn(uhat, norm="ortho")

    sup0 = float(np.abs(u_phys).max())
    if config.nonlinearity_on and config.dt * sup0**2 > PHASE_ROTATION_CAP:
        raise ValueError(
            f"dt * max|u0|^2 = {config.dt * sup0 ** 2:.3g} exceeds the stability cap "
            f"{PHASE_ROTATION_CAP}; reduce dt or the data amplitude"
        )

    taper_sym = Multiplier.i_operator(config.N, config.s).symbol(grid)
    half_kinetic = np.exp(-0.5j * config.dt * grid.xi_sq)

    n_steps = config.n_steps
    step_times = np.arange(n_steps + 1) * config.dt
    channels: dict[str, list[float]] = {k: [] for k in
                                        ("mass", "energy", "energy_Iu", "l4x", "hs", "h_half")}
    snap_times: list[float] = []
    snapshots: list[SpectralField] = []

    def record(j: int) -> None:
        nonlocal u_phys
        u_phys = np.fft.ifftn(uhat, norm="ortho")
        sample = _channel_sample(uhat, u_phys, grid, config, taper_sym)
        for key, val in sample.items():
            channels[key].append(val)
        if j % config.snapshot_stride == 0 or j == n_steps:
            snap_times.append(step_times[j])
            snapshots.append(SpectralField(grid, uhat.copy(), Repr.FREQUENCY))
        sup = float(np.abs(u_phys).max())
        if sup > DIVERGENCE_FACTOR * max(sup0, 1e-300):
            raise DivergenceError(f"sup norm {sup:.3g} exceeded guard at t = {step_times[j]:.6g}")

    u0hat = uhat.copy()
    record(0)
    for j in range(1, n_steps + 1):
        if config.nonlinearity_on:
            mid = np.fft.ifftn(uhat * half_kinetic, norm="ortho")
            mid = mid * np.exp(-1j * config.dt * np.abs(mid) ** 2)
            uhat = np.fft.fftn(mid, norm="ortho") * half_kinetic
        else:
            # exact free flow, no per-step phase accumulation
            uhat = u0hat * np.exp(-1j * step_times[j] * grid.xi_sq)
        record(j)

    series = DiagnosticSeries(step_times, {k: np.asarray(v) for k, v in channels.items()})
    return Trajectory(np.asarray(snap_times), snapshots, config=config, series=series)


def _series_for(snaps: list[SpectralField], times: np.ndarray, cfg: SolverConfig) -> DiagnosticSeries:
    taper_sym = Multiplier.i_operator(cfg.N, cfg.s).symbol(snaps[0].grid)
    channels: dict[str, list[float]] = {k: [] for k in
                                        ("mass", "energy", "energy_Iu", "l4x", "hs", "h_half")}
    for f in snaps:
        fhat = as_frequency(f).values
        fphys = as_physical(f).values
        for key, val in _channel_sample(fhat, fphys, f.grid, cfg, taper_sym).items():
            channels[key].append(val)
    return DiagnosticSeries(times, {k: np.asarray(v) for k, v in channels.items()})


def picard_solve(
    u0: SpectralField,
    T: float,
    n_steps: int,
    max_iter: int = 30,
    tol: float = 1e-10,
    config: SolverConfig | None = None,
) -> Trajectory:
    """Fixed point of the discretized Duhamel map
    u(t) = exp(it Laplace) u0 - i * integral_0^t exp(i(t-tau) Laplace) (|u|^2 u)(tau) dtau
    with composite-trapezoid quadrature on n_steps + 1 nodes. Iterates until the
    successive-iterate sup-in-time L^2 distance drops below tol."""
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    grid = u0.grid
    dt = T / n_steps
    times = np.arange(n_steps + 1) * dt
    u0hat = as_frequency(u0).values
    cv = grid.cell_volume

    # exp(i(t_j - tau) Laplace) = exp(-i t_j |xi|^2) * exp(+i tau |xi|^2)
    fwd = [np.exp(-1j * t * grid.xi_sq) for t in times]
    bwd = [np.exp(+1j * t * grid.xi_sq) for t in times]
    linear = [fwd[j] * u0hat for j in range(n_steps + 1)]

    iterate = [lin.copy() for lin in linear]
    distances: list[float] = []
    grew = 0
    for _ in range(max_iter):
        fhat = []
        for j in range(n_steps + 1):
            u = np.fft.ifftn(iterate[j], norm="ortho")
            fhat.append(np.fft.fftn(np.abs(u) ** 2 * u, norm="ortho"))
        new = [linear[0].copy()]
        cum = np.zeros(grid.shape, dtype=np.complex128)
        for j in range(1, n_steps + 1):
            cum = cum + 0.5 * dt * (bwd[j - 1] * fhat[j - 1] + bwd[j] * fhat[j])
            new.append(linear[j] - 1j * fwd[j] * cum)
        dist = max(
            math.sqrt(cv * float(np.sum(np.abs(new[j] - iterate[j]) ** 2)))
            for j in range(n_steps + 1)
        )
        iterate = new
        if distances and dist > distances[-1]:
            grew += 1
            if grew >= 3:
                raise NonContractionError(
                    f"iterate distances grew for 3 consecutive iterations (last {dist:.3g})"
                )
        else:
            grew = 0
        distances.append(dist)
        if dist < tol:
            break
    else:
        raise MaxIterExceededError(f"no contraction to tol={tol} in {max_iter} iterations")

    snaps = [SpectralField(grid, vals, Repr.FREQUENCY) for vals in iterate]
    cfg = config or SolverConfig(grid=grid, dt=dt, t_end=T)
    traj = Trajectory(times, snaps, config=cfg, series=_series_for(snaps, times, cfg))
    traj.picard_distances = distances  # run log for contraction inspection
    return traj


def duhamel_split(traj: Trajectory) -> DuhamelSplit:
    """Split each snapshot into the exact free evolution of the initial data
    plus the remainder; the two parts sum back to the snapshot exactly."""
    u0 = traj.snapshots[0]
    linear = [free_evolve(u0, t) for t in traj.times]
    nonlinear = [as_frequency(traj.snapshots[j]) - as_frequency(linear[j])
                 for j in range(traj.times.size)]
    lin_traj = Trajectory(traj.times.copy(), [as_frequency(f) for f in linear], config=traj.config)
    nl_traj = Trajectory(traj.times.copy(), nonlinear, config=traj.config)
    return DuhamelSplit(lin_traj, nl_traj)


def _is_power_of_two_real(x: float) -> bool:
    if x <= 0 or not math.isfinite(x):
        return False
    mant, _ = math.frexp(x)
    return mant == 0.5


def rescale(u0: SpectralField, lam: float) -> SpectralField:
    """Scaling map u -> (1/lam) u(x/lam), realized exactly by stretching the box
    to lam * box_length while keeping mode indices fixed (no interpolation)."""
    if not _is_power_of_two_real(lam):
        raise ValueError(f"lambda must be a power of two, got {lam}")
    new_grid = replace(u0.grid, box_length=lam * u0.grid.box_length)
    return SpectralField(new_grid, u0.values / lam, u0.repr)


def choose_lambda(N: float, s: float) -> float:
    """Scaling parameter N^((1-s)/(s-1/2)) rounded to the nearest power of two."""
    if not (0.5 < s < 1.0):
        raise ValueError(f"s must satisfy s in (1/2, 1), got {s}")
    if not N > 0:
        raise ValueError("N must be positive")
    exponent = (1.0 - s) / (s - 0.5)
    return float(2.0 ** round(math.log2(N**exponent)))
