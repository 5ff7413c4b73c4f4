"""Dense linear-algebra kernels used by the POD and DMD pipelines.

These are thin contract-enforcing wrappers over LAPACK (through
numpy/scipy): symmetry and rank checks, descending eigenvalue order, a
nonnegative-diagonal QR sign convention, and exact conjugate pairing for
real nonsymmetric eigenproblems. The test suite validates every kernel
against independent brute-force oracles (characteristic-polynomial
roots, Gram-Schmidt, closed-form 2x2/3x3 eigensystems).
"""

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import ContractError, DimensionError, NumericalError, SingularMatrixError

__all__ = [
    "RANK_TOL",
    "ComplexEigenPairs",
    "sym_eig",
    "qr_economy",
    "nonsym_eig",
    "tri_solve",
]

# Relative pivot threshold below which a triangular factor counts as
# rank-deficient; shared with the DMD companion construction.
RANK_TOL = 1e-12


class ComplexEigenPairs(NamedTuple):
    values: np.ndarray   # complex eigenvalues
    vectors: np.ndarray  # unit-norm eigenvector columns, vectors[:, j] for values[j]


def sym_eig(c, symmetry_tol: float = 1e-10):
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Returns (values, vectors) with orthonormal eigenvector columns.
    Raises ContractError if the input is asymmetric beyond
    ``symmetry_tol`` relative to its norm.
    """
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {c.shape}")
    scale = np.linalg.norm(c)
    if scale > 0 and np.linalg.norm(c - c.T) > symmetry_tol * scale:
        raise ContractError("matrix is not symmetric within tolerance")
    try:
        values, vectors = np.linalg.eigh(0.5 * (c + c.T))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver failed: {exc}") from exc
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order]


def qr_economy(a):
    """Economy QR with nonnegative R diagonal.

    A (M x k, M >= k) factors as Q (M x k, orthonormal columns) times
    R (k x k upper triangular).
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    m, k = a.shape
    if m < k:
        raise DimensionError(f"economy QR needs M >= k, got {m} x {k}")
    q, r = np.linalg.qr(a, mode="reduced")
    # Householder QR leaves the diagonal signs arbitrary; fix them.
    flip = np.diag(r) < 0
    if np.any(flip):
        q = q.copy()
        r = r.copy()
        q[:, flip] *= -1.0
        r[flip, :] *= -1.0
    return q, r


def _pair_conjugates(values, vectors):
    """Force exact conjugate pairing of a real matrix's eigensystem."""
    values = values.copy()
    vectors = vectors.copy()
    done = np.zeros(values.size, dtype=bool)
    for j in range(values.size):
        if done[j] or values[j].imag == 0.0:
            continue
        # LAPACK emits the partner adjacently; fall back to a search.
        partner = None
        if j + 1 < values.size and not done[j + 1]:
            if abs(values[j + 1] - values[j].conjugate()) <= 1e-8 * (1 + abs(values[j])):
                partner = j + 1
        if partner is None:
            cand = [
                k
                for k in range(values.size)
                if k != j and not done[k] and values[k].imag * values[j].imag < 0
            ]
            if cand:
                partner = min(cand, key=lambda k: abs(values[k] - values[j].conjugate()))
        if partner is not None:
            values[partner] = values[j].conjugate()
            vectors[:, partner] = vectors[:, j].conjugate()
            done[partner] = True
        done[j] = True
    return values, vectors


def nonsym_eig(a, residual_tol: float = 1e-8) -> ComplexEigenPairs:
    """Complex eigenpairs of a general real square matrix.

    Eigenvectors are unit norm; non-real eigenvalues of real input come
    in exact conjugate pairs. Residuals ||A x - mu x|| are verified
    against ``residual_tol * ||A||`` and failure raises NumericalError.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError("matrix contains non-finite entries")
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    values = values.astype(np.complex128)
    vectors = vectors.astype(np.complex128)
    vectors = vectors / np.linalg.norm(vectors, axis=0, keepdims=True)
    if np.isrealobj(a):
        values, vectors = _pair_conjugates(values, vectors)
    scale = np.linalg.norm(a)
    residuals = np.linalg.norm(a @ vectors - vectors * values, axis=0)
    worst = residuals.max(initial=0.0)
    if worst > residual_tol * max(scale, np.finfo(float).tiny):
        raise NumericalError(
            f"eigenpair residual {worst:.3e} exceeds {residual_tol:.1e} * ||A||"
        )
    return ComplexEigenPairs(values, vectors)


def tri_solve(r, b, rank_tol: float = RANK_TOL):
    """Solve R X = B by back-substitution for upper-triangular R.

    Never forms the inverse. Raises SingularMatrixError (with the pivot
    index) when a diagonal entry falls below ``rank_tol`` times the
    largest diagonal magnitude.
    """
    r = np.asarray(r, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise DimensionError(f"R must be square, got shape {r.shape}")
    if b.shape[0] != r.shape[0]:
        raise DimensionError(f"B has {b.shape[0]} rows, R is {r.shape[0]} x {r.shape[0]}")
    diag = np.abs(np.diag(r))
    dmax = diag.max(initial=0.0)
    bad = np.nonzero(diag <= rank_tol * dmax)[0] if dmax > 0 else np.arange(r.shape[0])
    if bad.size:
        idx = int(bad[0])
        raise SingularMatrixError(
            f"pivot {idx} of triangular factor is below rank tolerance "
            f"({diag[idx] if dmax > 0 else 0.0:.3e} vs max {dmax:.3e})",
            index=idx,
        )
    return scipy.linalg.solve_triangular(r, b, lower=False)
