"""2D incompressible pseudo-spectral solver with passive-scalar transport.

Vorticity-streamfunction formulation on the periodic square: the
spectral vorticity w_hat determines the streamfunction through
psi_hat = w_hat / |k|^2 (zero-mean gauge), velocities follow as
u = d(psi)/dy, v = -d(psi)/dx, and

    dw/dt = -(u . grad) w + nu * lap(w)
    dc/dt = -(u . grad) c + kappa * lap(c)

are advanced with classical 4-stage Runge-Kutta. Nonlinear products are
formed in physical space and dealiased with the 2/3 rule. The viscosity
scale is nu = u_ref * l_ref / re (jet peak speed times jet radius over
the Reynolds number), kappa = nu / schmidt; this convention sets the
simulated time unit and is the one knob that moves all time scales.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import ContractError, DimensionError, DivergenceError
from .fields import Grid2D, ScalarField, SnapshotMatrix

__all__ = [
    "SimConfig",
    "FlowState",
    "CollectResult",
    "CflWarning",
    "init_state",
    "poisson_streamfunction",
    "velocity",
    "scalar_field",
    "vorticity_field",
    "kinetic_energy",
    "spectral_divergence",
    "resolve_dt",
    "step",
    "run_collect",
]


class CflWarning(UserWarning):
    """Advective CFL number exceeded 1; the run may be inaccurate."""


@dataclass(frozen=True)
class SimConfig:
    """Numerical parameters of a jet run.

    dt = None picks the advective-CFL-0.5 step 0.5 * dx / u_ref at run
    time; n_steps = None runs exactly long enough to collect the
    requested snapshots (larger values add burn-in steps before the
    first sample).
    """

    re: float = 10_000.0
    dt: float | None = None
    n_steps: int | None = None
    snapshot_interval: int = 5
    collect_count: int = 30
    dealias: bool = True
    schmidt: float = 1.0
    u_ref: float = 0.1
    l_ref: float = 2.0 * math.pi / 20.0

    def __post_init__(self):
        if not self.re > 0.0:
            raise ContractError(f"re must be positive, got {self.re}")
        if self.dt is not None and not self.dt > 0.0:
            raise ContractError(f"dt must be positive, got {self.dt}")
        if self.snapshot_interval < 1:
            raise ContractError("snapshot_interval must be >= 1")
        if self.collect_count < 2:
            raise ContractError("collect_count must be >= 2")
        if not (self.schmidt > 0.0 and self.u_ref > 0.0 and self.l_ref > 0.0):
            raise ContractError("schmidt, u_ref, l_ref must be positive")

    @property
    def viscosity(self):
        return self.u_ref * self.l_ref / self.re

    @property
    def diffusivity(self):
        return self.viscosity / self.schmidt


@dataclass(frozen=True)
class FlowState:
    """Spectral vorticity and passive scalar at one instant."""

    grid: Grid2D
    omega_hat: np.ndarray = field(repr=False)
    scalar_hat: np.ndarray = field(repr=False)
    time: float = 0.0

    def __post_init__(self):
        n = self.grid.n
        for name in ("omega_hat", "scalar_hat"):
            a = np.asarray(getattr(self, name), dtype=np.complex128)
            if a.shape != (n, n):
                raise DimensionError(f"{name} must be {n}x{n}, got {a.shape}")
            a = a.copy()
            a.setflags(write=False)
            object.__setattr__(self, name, a)


class CollectResult(NamedTuple):
    snapshots: SnapshotMatrix
    mean_u: ScalarField
    mean_v: ScalarField


class _Operators(NamedTuple):
    kx: np.ndarray       # streamwise wavenumbers, varies along axis 1
    ky: np.ndarray       # cross-stream wavenumbers, varies along axis 0
    k2: np.ndarray
    inv_k2: np.ndarray   # 1/|k|^2 with the k = 0 entry set to 0
    dealias: np.ndarray  # 2/3-rule mask


@lru_cache(maxsize=16)
def _operators(grid: Grid2D) -> _Operators:
    n = grid.n
    k1 = 2.0 * np.pi * np.fft.fftfreq(n, d=grid.length / n)
    kx = k1[None, :]
    ky = k1[:, None]
    k2 = kx**2 + ky**2
    inv_k2 = np.zeros_like(k2)
    inv_k2[k2 > 0] = 1.0 / k2[k2 > 0]
    idx = np.abs(np.fft.fftfreq(n, d=1.0 / n))
    keep = n // 3
    mask = (idx[None, :] <= keep) & (idx[:, None] <= keep)
    return _Operators(kx, ky, k2, inv_k2, mask.astype(np.float64))


def _require_solver_grid(grid: Grid2D):
    if grid.n < 4:
        raise ContractError(f"the spectral solver needs n >= 4, got n={grid.n}")


def init_state(u: ScalarField, v: ScalarField, ps: ScalarField) -> FlowState:
    """Spectral state at t = 0 from velocity components and scalar.

    The vorticity dv/dx - du/dy is evaluated spectrally.
    """
    grid = u.grid
    if v.grid != grid or ps.grid != grid:
        raise DimensionError("U, V, PS must share one grid")
    _require_solver_grid(grid)
    ops = _operators(grid)
    u_hat = np.fft.fft2(u.values)
    v_hat = np.fft.fft2(v.values)
    omega_hat = 1j * ops.kx * v_hat - 1j * ops.ky * u_hat
    scalar_hat = np.fft.fft2(ps.values)
    return FlowState(grid, omega_hat, scalar_hat, 0.0)


def poisson_streamfunction(omega_hat, grid: Grid2D):
    """Invert lap(psi) = -w in spectral space; zero-mean gauge."""
    ops = _operators(grid)
    omega_hat = np.asarray(omega_hat, dtype=np.complex128)
    if omega_hat.shape != ops.k2.shape:
        raise DimensionError(
            f"omega_hat shape {omega_hat.shape} does not match grid n={grid.n}"
        )
    return omega_hat * ops.inv_k2


def _velocity_hat(omega_hat, ops):
    psi_hat = omega_hat * ops.inv_k2
    return 1j * ops.ky * psi_hat, -1j * ops.kx * psi_hat


def velocity(state: FlowState):
    """Physical-space velocity components (u, v) as arrays."""
    ops = _operators(state.grid)
    u_hat, v_hat = _velocity_hat(state.omega_hat, ops)
    return np.fft.ifft2(u_hat).real, np.fft.ifft2(v_hat).real


def scalar_field(state: FlowState) -> ScalarField:
    return ScalarField(state.grid, np.fft.ifft2(state.scalar_hat).real)


def vorticity_field(state: FlowState) -> ScalarField:
    return ScalarField(state.grid, np.fft.ifft2(state.omega_hat).real)


def kinetic_energy(state: FlowState) -> float:
    """Domain-integrated kinetic energy 0.5 * integral(u^2 + v^2)."""
    u, v = velocity(state)
    return 0.5 * float(np.mean(u * u + v * v)) * state.grid.length**2


def spectral_divergence(state: FlowState) -> float:
    """max |i kx u_hat + i ky v_hat|; zero up to round-off by construction."""
    ops = _operators(state.grid)
    u_hat, v_hat = _velocity_hat(state.omega_hat, ops)
    return float(np.abs(1j * ops.kx * u_hat + 1j * ops.ky * v_hat).max())


def resolve_dt(cfg: SimConfig, grid: Grid2D) -> float:
    """Configured time step, or the CFL-0.5 default at the reference speed."""
    if cfg.dt is not None:
        return cfg.dt
    return 0.5 * grid.dx / cfg.u_ref


def step(state: FlowState, cfg: SimConfig, step_index: int | None = None) -> FlowState:
    """One classical RK4 step of the vorticity/scalar system."""
    grid = state.grid
    _require_solver_grid(grid)
    ops = _operators(grid)
    dt = resolve_dt(cfg, grid)
    nu = cfg.viscosity
    kappa = cfg.diffusivity

    def rhs(w_hat, c_hat, check_cfl=False):
        u_hat, v_hat = _velocity_hat(w_hat, ops)
        u = np.fft.ifft2(u_hat).real
        v = np.fft.ifft2(v_hat).real
        if check_cfl:
            vmax = max(np.abs(u).max(), np.abs(v).max())
            cfl = dt * vmax / grid.dx
            if cfl > 1.0:
                warnings.warn(
                    f"advective CFL {cfl:.2f} > 1 at t={state.time:.4g}",
                    CflWarning,
                    stacklevel=3,
                )
        w_x = np.fft.ifft2(1j * ops.kx * w_hat).real
        w_y = np.fft.ifft2(1j * ops.ky * w_hat).real
        c_x = np.fft.ifft2(1j * ops.kx * c_hat).real
        c_y = np.fft.ifft2(1j * ops.ky * c_hat).real
        adv_w = np.fft.fft2(u * w_x + v * w_y)
        adv_c = np.fft.fft2(u * c_x + v * c_y)
        if cfg.dealias:
            adv_w *= ops.dealias
            adv_c *= ops.dealias
        return -adv_w - nu * ops.k2 * w_hat, -adv_c - kappa * ops.k2 * c_hat

    w0, c0 = state.omega_hat, state.scalar_hat
    kw1, kc1 = rhs(w0, c0, check_cfl=True)
    kw2, kc2 = rhs(w0 + 0.5 * dt * kw1, c0 + 0.5 * dt * kc1)
    kw3, kc3 = rhs(w0 + 0.5 * dt * kw2, c0 + 0.5 * dt * kc2)
    kw4, kc4 = rhs(w0 + dt * kw3, c0 + dt * kc3)
    w_new = w0 + (dt / 6.0) * (kw1 + 2.0 * kw2 + 2.0 * kw3 + kw4)
    c_new = c0 + (dt / 6.0) * (kc1 + 2.0 * kc2 + 2.0 * kc3 + kc4)

    if not (np.all(np.isfinite(w_new)) and np.all(np.isfinite(c_new))):
        where = f"step {step_index}" if step_index is not None else f"t={state.time:.4g}"
        raise DivergenceError(
            f"non-finite values in state after {where}; reduce dt",
            step_index=step_index,
        )
    return FlowState(grid, w_new, c_new, state.time + dt)


def run_collect(cfg: SimConfig, state0: FlowState) -> CollectResult:
    """March the flow and sample the passive scalar.

    Snapshots are recorded after each block of ``snapshot_interval``
    steps until ``collect_count`` columns exist; steps beyond that
    budget (n_steps larger than interval * count) are spent first as
    burn-in. Also accumulates the mean velocity fields over the sampled
    instants.
    """
    grid = state0.grid
    needed = cfg.collect_count * cfg.snapshot_interval
    total = needed if cfg.n_steps is None else cfg.n_steps
    if total < needed:
        raise ContractError(
            f"n_steps={total} cannot fit {cfg.collect_count} snapshots "
            f"every {cfg.snapshot_interval} steps ({needed} needed)"
        )
    dt = resolve_dt(cfg, grid)
    state = state0
    index = 0
    for _ in range(total - needed):
        state = step(state, cfg, step_index=index)
        index += 1

    columns = np.empty((grid.n * grid.n, cfg.collect_count))
    u_sum = np.zeros((grid.n, grid.n))
    v_sum = np.zeros((grid.n, grid.n))
    for j in range(cfg.collect_count):
        for _ in range(cfg.snapshot_interval):
            state = step(state, cfg, step_index=index)
            index += 1
        columns[:, j] = np.fft.ifft2(state.scalar_hat).real.reshape(-1)
        u, v = velocity(state)
        u_sum += u
        v_sum += v

    snapshots = SnapshotMatrix(data=columns, dt_snap=cfg.snapshot_interval * dt)
    count = float(cfg.collect_count)
    return CollectResult(
        snapshots,
        ScalarField(grid, u_sum / count),
        ScalarField(grid, v_sum / count),
    )
