"""Co-axial jet snapshot generation and modal decomposition.

A pseudo-spectral vorticity-streamfunction solver evolves a doubly
periodic two-jet shear flow carrying a passive scalar; the collected
scalar snapshots are analyzed with snapshot-based proper orthogonal
decomposition and companion-matrix dynamic mode decomposition.
"""

from . import diagnostics, dmd, linalg, pod, snapio
from .errors import (
    ContractError,
    DimensionError,
    DivergenceError,
    FormatError,
    InsufficientDataError,
    KhjetError,
    NumericalError,
    SingularMatrixError,
    UnknownPresetError,
)
from .fields import (
    Grid2D,
    ScalarField,
    SnapshotMatrix,
    assemble_snapshots,
    flatten,
    unflatten,
)
from .jet import JetConfig, build_initial_conditions, preset, with_resolution
from .solver import (
    CflWarning,
    CollectResult,
    FlowState,
    SimConfig,
    init_state,
    kinetic_energy,
    resolve_dt,
    run_collect,
    scalar_field,
    spectral_divergence,
    step,
    velocity,
    vorticity_field,
)

__all__ = [
    "Grid2D",
    "ScalarField",
    "SnapshotMatrix",
    "assemble_snapshots",
    "flatten",
    "unflatten",
    "JetConfig",
    "build_initial_conditions",
    "preset",
    "with_resolution",
    "SimConfig",
    "FlowState",
    "CollectResult",
    "CflWarning",
    "init_state",
    "step",
    "run_collect",
    "velocity",
    "scalar_field",
    "vorticity_field",
    "kinetic_energy",
    "spectral_divergence",
    "resolve_dt",
    "pod",
    "dmd",
    "linalg",
    "diagnostics",
    "snapio",
    "KhjetError",
    "DimensionError",
    "InsufficientDataError",
    "UnknownPresetError",
    "ContractError",
    "FormatError",
    "NumericalError",
    "SingularMatrixError",
    "DivergenceError",
]

__version__ = "0.1.0"
