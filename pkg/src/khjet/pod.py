"""Proper Orthogonal Decomposition by the method of snapshots.

The pipeline works on the temporal Gram matrix instead of the huge
spatial covariance: center the snapshots, form C = U^T U (N x N), solve
the symmetric eigenproblem, and build each spatial mode as the
eigenvector-weighted combination of fluctuation snapshots,

    phi_i = sum_n A_n^i U^n / || sum_n A_n^i U^n ||.

Eigenvalues are reported unscaled (no 1/N factor); energy fractions and
modes are invariant to that constant. Time coefficients are the
projections a_i(t_n) = phi_i . U^n. Modes whose eigenvalue sits at the
round-off floor of the Gram matrix are kept but flagged degenerate and
left unnormalized rather than divided by a meaningless tiny norm.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import ContractError, InsufficientDataError
from .fields import SnapshotMatrix

__all__ = [
    "DEGENERATE_TOL",
    "PodResult",
    "fluctuations",
    "autocovariance",
    "decompose",
    "energy_fractions",
    "reconstruct",
    "modes_for_energy",
]

# Relative eigenvalue floor below which a mode counts as numerically
# zero: the Gram matrix entries carry absolute round-off of order
# eps * lambda_1, so eigenvalues near that floor are pure noise.
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class PodResult:
    """Mean field, eigenvalues (descending), spatial modes, and
    time coefficients a_i(t_n) stored as time_coefficients[i, n]."""

    mean: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    modes: np.ndarray = field(repr=False)
    time_coefficients: np.ndarray = field(repr=False)
    energy_fractions: np.ndarray = field(repr=False)
    degenerate: np.ndarray = field(repr=False)
    dt_snap: float = 1.0

    @property
    def n_modes(self):
        return self.modes.shape[1]


def fluctuations(s: SnapshotMatrix):
    """Subtract the temporal mean from each snapshot column.

    Returns (U, mean) where U's rows sum to zero up to round-off.
    """
    if s.n_snapshots < 2:
        raise InsufficientDataError("need at least 2 snapshots to form fluctuations")
    mean = s.data.mean(axis=1)
    return s.data - mean[:, None], mean


def autocovariance(u):
    """Temporal Gram matrix C = U^T U, symmetrized against round-off."""
    u = np.asarray(u, dtype=np.float64)
    c = u.T @ u
    return 0.5 * (c + c.T)


def decompose(s: SnapshotMatrix, degenerate_tol: float = DEGENERATE_TOL) -> PodResult:
    """Full snapshot-POD of a snapshot matrix.

    Eigenvalues are sorted descending and clipped at zero; each mode's
    sign is fixed so its largest-magnitude entry is positive, which
    makes the output deterministic.
    """
    if s.n_snapshots < 2:
        raise InsufficientDataError("POD needs at least 2 snapshots")
    if s.n_pixels < s.n_snapshots:
        warnings.warn(
            "method of snapshots expects more pixels than snapshots "
            f"(M={s.n_pixels} < N={s.n_snapshots})",
            stacklevel=2,
        )
    u, mean = fluctuations(s)
    c = autocovariance(u)
    values, vectors = linalg.sym_eig(c)
    values = np.clip(values, 0.0, None)

    lead = values[0] if values.size else 0.0
    degenerate = values <= degenerate_tol * lead

    raw = u @ vectors  # column i = sum_n A_n^i U^n
    norms = np.linalg.norm(raw, axis=0)
    modes = raw.copy()
    ok = ~degenerate & (norms > 0)
    modes[:, ok] /= norms[ok]

    # Sign convention: largest-magnitude entry of each mode positive.
    for i in range(modes.shape[1]):
        peak = np.argmax(np.abs(modes[:, i]))
        if modes[peak, i] < 0:
            modes[:, i] = -modes[:, i]

    coeffs = modes.T @ u
    return PodResult(
        mean=mean,
        eigenvalues=values,
        modes=modes,
        time_coefficients=coeffs,
        energy_fractions=energy_fractions(values),
        degenerate=degenerate,
        dt_snap=s.dt_snap,
    )


def energy_fractions(eigenvalues, negative_tol: float = 1e-10):
    """lambda_i / sum(lambda); all zeros (with a warning) if the total
    energy vanishes."""
    lam = np.asarray(eigenvalues, dtype=np.float64)
    scale = np.abs(lam).max(initial=0.0)
    if np.any(lam < -negative_tol * max(scale, 1.0)):
        raise ContractError("eigenvalues must be nonnegative beyond round-off slack")
    lam = np.clip(lam, 0.0, None)
    total = lam.sum()
    if total == 0.0:
        warnings.warn("total energy is zero; fractions are degenerate", stacklevel=2)
        return np.zeros_like(lam)
    return lam / total


def reconstruct(result: PodResult, k: int):
    """Rank-k expansion sum_{i<=k} phi_i a_i(t_n), one column per snapshot."""
    if not 1 <= k <= result.n_modes:
        raise ContractError(
            f"mode count k={k} out of range 1..{result.n_modes}"
        )
    return result.modes[:, :k] @ result.time_coefficients[:k, :]


def modes_for_energy(fractions, target: float = 0.95) -> int:
    """Smallest k whose cumulative energy fraction reaches the target."""
    if not 0.0 < target <= 1.0:
        raise ContractError(f"target must lie in (0, 1], got {target}")
    cum = np.cumsum(np.asarray(fractions, dtype=np.float64))
    hit = np.nonzero(cum >= target - 1e-12)[0]
    return int(hit[0]) + 1 if hit.size else len(cum)
