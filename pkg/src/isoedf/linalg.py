"""Dense linear algebra kernels behind the rest of the package.

Thin contract layer over LAPACK (via numpy): input validation, ordering
and tolerance conventions live here so callers never touch numpy.linalg
directly.
"""

from __future__ import annotations

import numpy as np


class NumericError(RuntimeError):
    """An iterative kernel failed to converge."""


def sym_eigenvalues(a: np.ndarray) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, sorted descending."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    try:
        vals = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"symmetric eigensolver failed: {e}") from e
    return vals[::-1].copy()


def hermitian_eigenvalues(a: np.ndarray) -> np.ndarray:
    """All eigenvalues of a complex Hermitian matrix, sorted descending.

    Rejects inputs whose Hermitian defect exceeds 1e-10 relative to the
    Frobenius norm.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > 1e-10 * max(scale, np.finfo(float).tiny):
        raise ValueError("matrix is not Hermitian within 1e-10 relative tolerance")
    try:
        vals = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"Hermitian eigensolver failed: {e}") from e
    return vals[::-1].copy()


def sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root B with B @ B ~= a.

    Eigenvalues in [-1e-10 * lambda_max, 0) are treated as round-off and
    clamped to zero; anything more negative raises.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"symmetric eigensolver failed: {e}") from e
    lam_max = max(vals[-1], 0.0)
    if vals[0] < -1e-10 * lam_max:
        raise ValueError(
            f"matrix is not PSD: min eigenvalue {vals[0]:.3e} "
            f"below -1e-10 * lambda_max = {-1e-10 * lam_max:.3e}"
        )
    root = vecs * np.sqrt(np.clip(vals, 0.0, None))
    b = root @ vecs.T
    return (b + b.T) / 2


def poly_roots(coeffs: np.ndarray) -> np.ndarray:
    """All roots of a polynomial given by ascending coefficients c0..cd.

    Companion-matrix eigenvalues; the QR path balances the companion
    matrix first, which matters because the convolution polynomials feed
    in coefficients spanning many orders of magnitude near support edges.
    """
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    n = len(coeffs)
    while n > 1 and coeffs[n - 1] == 0:
        n -= 1
    coeffs = coeffs[:n]
    if n < 2:
        raise ValueError("polynomial degree must be at least 1")
    monic = coeffs / coeffs[-1]
    d = n - 1
    if d == 1:
        return np.array([-monic[0]])
    comp = np.zeros((d, d), dtype=complex)
    comp[0, :] = -monic[d - 1 :: -1]
    comp[1:, :-1] = np.eye(d - 1)
    try:
        return np.linalg.eigvals(comp)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"companion QR failed for degree {d}: {e}") from e
