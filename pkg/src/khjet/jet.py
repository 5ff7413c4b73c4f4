"""Co-axial jet initial conditions.

Two parallel tanh jets of radius ``r_o`` run along the horizontal axis,
centered at L/2 -+ case_offset on the vertical axis. The profile for a
single jet at distance d from its centerline is

    u_max * 0.5 * (1 - tanh(B * (d/r_o - r_o/d)))

which is u_max on the centerline (the d -> 0 limit), half height at
d = r_o, and decays to zero outside. The summed two-jet profile is
rescaled so its grid maximum is exactly u_max. The transverse velocity
is seeded with uniform noise in [-v_max/2, v_max/2) to trigger the
shear-layer instability, and the passive scalar is the streamwise
profile normalized to a maximum of exactly 1.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ContractError, UnknownPresetError
from .fields import Grid2D, ScalarField

__all__ = ["JetConfig", "preset", "build_initial_conditions"]

TAU = 2.0 * math.pi


@dataclass(frozen=True)
class JetConfig:
    """Physical and sampling parameters of the co-axial jet.

    Fields left as None default to the standard values: v_max = u_max/30,
    r_o = L/20, case_offset = L/10 (the close-jets case).
    """

    length: float = TAU
    n: int = 256
    u_max: float = 0.1
    v_max: float | None = None
    r_o: float | None = None
    steepness: float = 10.5
    case_offset: float | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.v_max is None:
            object.__setattr__(self, "v_max", self.u_max / 30.0)
        if self.r_o is None:
            object.__setattr__(self, "r_o", self.length / 20.0)
        if self.case_offset is None:
            object.__setattr__(self, "case_offset", self.length / 10.0)
        for name in ("length", "u_max", "r_o", "steepness"):
            if not getattr(self, name) > 0.0:
                raise ContractError(f"{name} must be positive")
        if not 0.0 < self.case_offset < self.length / 2.0:
            raise ContractError(
                f"case_offset must lie in (0, L/2), got {self.case_offset}"
            )
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            raise ContractError(f"n must be a power of two, got {self.n}")

    @property
    def grid(self) -> Grid2D:
        return Grid2D(self.n, self.length)

    @property
    def jet_centers(self):
        """Vertical positions of the two jet centerlines."""
        half = self.length / 2.0
        return half - self.case_offset, half + self.case_offset


def preset(case_id: int) -> JetConfig:
    """Standard configurations: case 1 = jets L/10 apart from the
    midline (close, interacting), case 2 = L/5 (far, independent)."""
    if case_id == 1:
        return JetConfig(case_offset=TAU / 10.0)
    if case_id == 2:
        return JetConfig(case_offset=TAU / 5.0)
    raise UnknownPresetError(f"unknown jet case {case_id!r}; valid cases are 1 and 2")


def _jet_profile(dist, r_o, steepness):
    """0.5 * (1 - tanh(B * (d/r - r/d))) with the analytic d = 0 limit of 1."""
    on_axis = dist == 0.0
    d = np.where(on_axis, 1.0, dist)  # placeholder to keep the division finite
    arg = steepness * (d / r_o - r_o / d)
    prof = 0.5 * (1.0 - np.tanh(arg))
    prof[on_axis] = 1.0
    return prof


def build_initial_conditions(cfg: JetConfig):
    """Return (U, V, PS) fields for the configured jet pair.

    U: streamwise velocity, constant along the streamwise axis, grid
       maximum exactly u_max.
    V: transverse velocity, i.i.d. uniform noise in [-v_max/2, v_max/2)
       drawn from a PCG64 generator seeded with rng_seed.
    PS: passive scalar U / max(U), maximum exactly 1.
    """
    grid = cfg.grid
    y = grid.coords
    y1, y2 = cfg.jet_centers
    profile = cfg.u_max * (
        _jet_profile(np.abs(y - y1), cfg.r_o, cfg.steepness)
        + _jet_profile(np.abs(y - y2), cfg.r_o, cfg.steepness)
    )
    # Cross-stream coordinate varies along the first array index, so the
    # jets render as horizontal bands.
    u = np.broadcast_to(profile[:, None], (cfg.n, cfg.n)).copy()
    # grouped so the peak entry becomes u_max * (m / m) = u_max bit-exactly
    u = cfg.u_max * (u / u.max())

    rng = np.random.default_rng(cfg.rng_seed)
    v = cfg.v_max * (rng.random((cfg.n, cfg.n)) - 0.5)

    ps = u / u.max()
    return ScalarField(grid, u), ScalarField(grid, v), ScalarField(grid, ps)


def with_resolution(cfg: JetConfig, n: int) -> JetConfig:
    """Same jet at a different grid resolution."""
    return replace(cfg, n=n)
