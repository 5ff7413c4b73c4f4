"""Brute-force reference implementations used only by the tests.

These deliberately avoid the library's own linear-algebra paths (and
LAPACK eigen-drivers) so that agreement between the package and this
file is a genuine cross-check: characteristic polynomials come from the
Faddeev-LeVerrier recursion, polynomial roots from Durand-Kerner
iteration, QR from modified Gram-Schmidt, and small symmetric
eigensystems from closed-form formulas.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment


def char_poly_coeffs(a):
    """Characteristic polynomial of a (monic, highest power first).

    Faddeev-LeVerrier: M_0 = 0, c_0 = 1; M_k = A M_{k-1} + c_{k-1} I,
    c_k = -trace(A M_k)/k.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * np.eye(n)
        coeffs[k] = -np.trace(a @ m) / k
    return coeffs


def durand_kerner_roots(coeffs, max_iter=1000, tol=1e-14):
    """All complex roots of a polynomial by simultaneous iteration."""
    c = np.asarray(coeffs, dtype=np.complex128)
    c = c / c[0]
    n = len(c) - 1
    # start on a circle with an irrational twist so no iterate begins
    # exactly on a real root
    radius = 1.0 + max(abs(c[1:]), default=0.0)
    z = radius * np.exp(2j * np.pi * (np.arange(n) / n + 0.06180339887))
    for _ in range(max_iter):
        p = np.polyval(c, z)
        denom = np.array(
            [np.prod(z[i] - np.delete(z, i)) for i in range(n)]
        )
        step = p / denom
        z = z - step
        if np.abs(step).max() < tol * max(1.0, np.abs(z).max()):
            break
    return z


def eig_by_char_poly(a):
    """Eigenvalues of a small matrix via its characteristic polynomial."""
    return durand_kerner_roots(char_poly_coeffs(a))


def mgs_qr(a):
    """Economy QR by modified Gram-Schmidt with nonnegative R diagonal."""
    a = np.asarray(a, dtype=np.float64)
    m, k = a.shape
    q = np.array(a, copy=True)
    r = np.zeros((k, k))
    for j in range(k):
        for i in range(j):
            r[i, j] = q[:, i] @ q[:, j]
            q[:, j] = q[:, j] - r[i, j] * q[:, i]
        r[j, j] = np.linalg.norm(q[:, j])
        if r[j, j] > 0.0:
            q[:, j] = q[:, j] / r[j, j]
    return q, r


def sym_eig_2x2(a):
    """Closed-form eigensystem of a symmetric 2x2, descending order."""
    a = np.asarray(a, dtype=np.float64)
    p, b, c = a[0, 0], a[0, 1], a[1, 1]
    half_gap = np.hypot((p - c) / 2.0, b)
    center = (p + c) / 2.0
    values = np.array([center + half_gap, center - half_gap])
    vectors = np.zeros((2, 2))
    for i, lam in enumerate(values):
        # pick the numerically larger of the two null-space expressions
        v1 = np.array([b, lam - p])
        v2 = np.array([lam - c, b])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        norm = np.linalg.norm(v)
        vectors[:, i] = v / norm if norm > 0 else np.eye(2)[:, i]
    return values, vectors


def sym_eig_3x3_values(a):
    """Closed-form eigenvalues of a symmetric 3x3, descending order.

    Trigonometric solution of the depressed cubic; exact for the
    well-separated matrices the tests feed it.
    """
    a = np.asarray(a, dtype=np.float64)
    p1 = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
    if p1 == 0.0:
        return np.sort(np.diag(a))[::-1]
    q = np.trace(a) / 3.0
    p2 = ((a[0, 0] - q) ** 2 + (a[1, 1] - q) ** 2 + (a[2, 2] - q) ** 2) + 2.0 * p1
    p = np.sqrt(p2 / 6.0)
    b = (a - q * np.eye(3)) / p
    r = np.clip(np.linalg.det(b) / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    lam1 = q + 2.0 * p * np.cos(phi)
    lam3 = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    lam2 = 3.0 * q - lam1 - lam3
    return np.array([lam1, lam2, lam3])


def rotation_matrix(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotation_snapshots(theta, count, start=(1.0, 0.0)):
    """Columns v_j = Rot(j*theta) @ start for j = 0 .. count-1."""
    start = np.asarray(start, dtype=np.float64)
    return np.column_stack(
        [rotation_matrix(j * theta) @ start for j in range(count)]
    )


def match_max_dev(found, expected):
    """Max pairwise deviation under the optimal one-to-one matching."""
    found = np.asarray(found, dtype=np.complex128).ravel()
    expected = np.asarray(expected, dtype=np.complex128).ravel()
    assert found.size == expected.size, (found.size, expected.size)
    cost = np.abs(found[:, None] - expected[None, :])
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].max()


def align_sign(column, reference):
    """Flip column so it points along reference (for sign-ambiguous modes)."""
    return column if float(column @ reference) >= 0.0 else -column
