"""Periodic square grids, scalar fields, and the snapshot matrix.

Array convention used throughout the package: a field is an (n, n) array
``values[i, j]`` where the first index walks the cross-stream (vertical)
coordinate and the second index the streamwise (horizontal) coordinate,
both sampled at node positions ``i * dx`` on the periodic domain [0, L).
Flattening is row-major, ``k = i * n + j``, so images and file payloads
are reproducible bit-exactly.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ContractError, DimensionError, InsufficientDataError

__all__ = [
    "Grid2D",
    "ScalarField",
    "SnapshotMatrix",
    "flatten",
    "unflatten",
    "assemble_snapshots",
]


def _locked(a):
    """Return a float64 copy that refuses in-place writes."""
    out = np.array(a, dtype=np.float64, copy=True, order="C")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Grid2D:
    """Uniform n-by-n periodic grid on [0, L) x [0, L).

    n must be a power of two; the flow solver additionally requires
    n >= 4 so that the 2/3 dealiasing band is non-empty, but the smaller
    sizes remain valid for plain field bookkeeping.
    """

    n: int
    length: float = 2.0 * np.pi

    def __post_init__(self):
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            raise ContractError(f"grid side must be a power of two >= 2, got {self.n}")
        if not (self.length > 0.0 and np.isfinite(self.length)):
            raise ContractError(f"domain length must be positive, got {self.length}")

    @property
    def dx(self):
        return self.length / self.n

    @cached_property
    def coords(self):
        """Node coordinates i * dx, identical along both axes."""
        return _locked(np.arange(self.n) * self.dx)

    @property
    def x_coords(self):
        return self.coords

    @property
    def y_coords(self):
        return self.coords


@dataclass(frozen=True)
class ScalarField:
    """Real-valued samples on a Grid2D; immutable after construction."""

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.n, self.grid.n):
            raise DimensionError(
                f"field shape {v.shape} does not match grid {self.grid.n}x{self.grid.n}"
            )
        if not np.all(np.isfinite(v)):
            raise ContractError("field contains non-finite entries")
        object.__setattr__(self, "values", _locked(v))


@dataclass(frozen=True)
class SnapshotMatrix:
    """M x N matrix whose columns are flattened fields at successive times.

    M is the pixel count (n**2 for assembled jet data) and N the snapshot
    count; dt_snap is the time between adjacent columns.
    """

    data: np.ndarray = field(repr=False)
    dt_snap: float

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.float64)
        if d.ndim != 2:
            raise DimensionError(f"snapshot data must be 2-D, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise ContractError("snapshot matrix contains non-finite entries")
        if not (self.dt_snap > 0.0 and np.isfinite(self.dt_snap)):
            raise ContractError(f"dt_snap must be positive, got {self.dt_snap}")
        object.__setattr__(self, "data", _locked(d))

    @property
    def n_pixels(self):
        return self.data.shape[0]

    @property
    def n_snapshots(self):
        return self.data.shape[1]

    def grid_side(self):
        """Side length n of the originating square grid (requires M = n**2)."""
        n = round(self.n_pixels**0.5)
        if n * n != self.n_pixels:
            raise DimensionError(
                f"pixel count {self.n_pixels} is not a perfect square"
            )
        return n


def flatten(fld: ScalarField) -> np.ndarray:
    """Row-major column vector of a field: entry i*n + j is values[i, j]."""
    return fld.values.reshape(-1).copy()


def unflatten(column, grid: Grid2D) -> ScalarField:
    """Inverse of flatten under the same row-major convention."""
    col = np.asarray(column, dtype=np.float64)
    if col.shape != (grid.n * grid.n,):
        raise DimensionError(
            f"column has {col.size} entries, grid needs {grid.n * grid.n}"
        )
    return ScalarField(grid, col.reshape(grid.n, grid.n))


def assemble_snapshots(fields, dt_snap: float) -> SnapshotMatrix:
    """Stack fields as the columns of a snapshot matrix, values untouched."""
    fields = list(fields)
    if len(fields) < 2:
        raise InsufficientDataError(
            f"need at least 2 fields to assemble snapshots, got {len(fields)}"
        )
    grid = fields[0].grid
    for k, fld in enumerate(fields):
        if fld.grid != grid:
            raise DimensionError(
                f"field {k} lives on grid n={fld.grid.n}, expected n={grid.n}"
            )
    data = np.column_stack([flatten(f) for f in fields])
    return SnapshotMatrix(data=data, dt_snap=dt_snap)
