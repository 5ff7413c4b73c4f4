"""Companion-matrix Dynamic Mode Decomposition.

The raw (uncentered) snapshot matrix is split into the overlapping
blocks V1 = columns 1..N-1 and V2 = columns 2..N. The companion matrix
S is the least-squares solution of V2 ~ V1 S, computed from the economy
QR factorization V1 = Q R as the triangular solve R S = Q^T V2 (the
inverse of R is never formed). Eigenvalues mu of S approximate the
per-snapshot multipliers of the underlying evolution; the logarithmic
spectrum lambda = log(mu) / dt_snap separates growth rate (real part)
from angular frequency (imaginary part, principal branch, so
frequencies above pi/dt_snap alias). Dynamic modes are snapshot-basis
combinations V1 x for each eigenvector x and are ranked by norm.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError, InsufficientDataError, SingularMatrixError
from .fields import SnapshotMatrix

__all__ = [
    "DmdResult",
    "split",
    "companion_via_qr",
    "dmd_eigs",
    "spectrum",
    "dynamic_modes",
    "classify",
    "decompose",
    "STABLE",
    "NEUTRAL",
    "UNSTABLE",
]

STABLE = "stable"
NEUTRAL = "neutral"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class DmdResult:
    """Companion matrix, its eigensystem, and derived mode data.

    multipliers are the discrete-time eigenvalues mu; spectrum holds
    log(mu)/dt_snap. stability labels each eigenvalue against the unit
    disk. Modes are complex M x (N-1), column j belonging to mu_j, with
    amplitudes their Euclidean norms.
    """

    companion: np.ndarray = field(repr=False)
    multipliers: np.ndarray = field(repr=False)
    spectrum: np.ndarray = field(repr=False)
    modes: np.ndarray = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)
    stability: tuple
    dt_snap: float

    @property
    def n_modes(self):
        return self.modes.shape[1]

    def ranked_by_amplitude(self):
        """Mode indices sorted by decreasing amplitude."""
        return np.argsort(self.amplitudes)[::-1]

    def ranked_by_frequency(self):
        """Mode indices sorted by increasing |angular frequency|."""
        return np.argsort(np.abs(self.spectrum.imag), kind="stable")


def split(s: SnapshotMatrix):
    """(V1, V2) = (columns 1..N-1, columns 2..N); needs N >= 3."""
    if s.n_snapshots < 3:
        raise InsufficientDataError(
            f"DMD needs at least 3 snapshots, got {s.n_snapshots}"
        )
    return s.data[:, :-1].copy(), s.data[:, 1:].copy()


def companion_via_qr(v1, v2, rank_tol: float = linalg.RANK_TOL):
    """Least-squares companion matrix S with R S = Q^T V2.

    Raises SingularMatrixError naming the offending diagonal index when
    V1 is numerically rank-deficient, and DimensionError when V1 has
    fewer rows than columns.
    """
    v1 = np.asarray(v1, dtype=np.float64)
    v2 = np.asarray(v2, dtype=np.float64)
    if v1.shape != v2.shape:
        raise DimensionError(f"V1 {v1.shape} and V2 {v2.shape} must match")
    m, k = v1.shape
    if m < k:
        raise DimensionError(
            f"companion QR needs at least as many pixels as columns ({m} < {k})"
        )
    q, r = linalg.qr_economy(v1)
    diag = np.abs(np.diag(r))
    small = np.nonzero(diag <= rank_tol * diag.max(initial=0.0))[0]
    if diag.max(initial=0.0) == 0.0 or small.size:
        idx = int(small[0]) if small.size else 0
        raise SingularMatrixError(
            f"snapshot block V1 is rank-deficient at column {idx} "
            f"(|R[{idx},{idx}]| = {diag[idx] if diag.size else 0.0:.3e})",
            index=idx,
        )
    return linalg.tri_solve(r, q.T @ v2, rank_tol=rank_tol)


def dmd_eigs(companion) -> linalg.ComplexEigenPairs:
    """Eigenvalues and unit-norm eigenvectors of the companion matrix."""
    return linalg.nonsym_eig(companion)


def spectrum(multipliers, dt_snap: float):
    """Logarithmic spectrum log(mu)/dt_snap on the principal branch.

    A zero multiplier maps to growth rate -inf (frequency 0) instead of
    raising; such modes are legitimate for rank-deficient data.
    """
    if not dt_snap > 0.0:
        raise DimensionError(f"dt_snap must be positive, got {dt_snap}")
    mu = np.asarray(multipliers, dtype=np.complex128)
    out = np.empty_like(mu)
    zero = mu == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~zero] = np.log(mu[~zero]) / dt_snap
    out[zero] = complex(-np.inf, 0.0)
    return out


def dynamic_modes(v1, eigenvectors):
    """Modes DM_j = V1 x_j; returns (modes, amplitudes)."""
    v1 = np.asarray(v1)
    x = np.asarray(eigenvectors)
    if v1.ndim != 2 or x.ndim != 2 or v1.shape[1] != x.shape[0]:
        raise DimensionError(
            f"cannot combine snapshots {v1.shape} with eigenvectors {x.shape}"
        )
    modes = v1 @ x
    return modes, np.linalg.norm(modes, axis=0)


def classify(mu, tol: float = 1e-6) -> str:
    """Unit-disk stability of one multiplier.

    |mu| > 1 + tol is unstable, |mu| < 1 - tol stable, the band between
    neutral. After the logarithmic mapping the same split reads off the
    sign of the growth rate.
    """
    if tol < 0.0:
        raise DimensionError(f"tol must be nonnegative, got {tol}")
    r = abs(mu)
    if r > 1.0 + tol:
        return UNSTABLE
    if r < 1.0 - tol:
        return STABLE
    return NEUTRAL


def decompose(
    s: SnapshotMatrix,
    rank_tol: float = linalg.RANK_TOL,
    stability_tol: float = 1e-6,
) -> DmdResult:
    """Run the full companion-matrix pipeline on a snapshot matrix."""
    v1, v2 = split(s)
    companion = companion_via_qr(v1, v2, rank_tol=rank_tol)
    values, vectors = dmd_eigs(companion)
    modes, amplitudes = dynamic_modes(v1, vectors)
    return DmdResult(
        companion=companion,
        multipliers=values,
        spectrum=spectrum(values, s.dt_snap),
        modes=modes,
        amplitudes=amplitudes,
        stability=tuple(classify(mu, stability_tol) for mu in values),
        dt_snap=s.dt_snap,
    )
