"""Small complex linear-algebra helpers for the channel model."""

from __future__ import annotations

import numpy as np

__all__ = ["hermitian_psd_sqrt", "kronecker", "quadratic_form"]

_HERMITIAN_TOL = 1e-10
_NEG_EIG_TOL = 1e-8


def hermitian_psd_sqrt(R: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues slightly below zero (down to ``-1e-8 * ||R||``) are clamped,
    which keeps rank-deficient matrices such as the all-ones correlation
    matrix usable.

    Raises
    ------
    ValueError
        If ``R`` is not square, not Hermitian to 1e-10 elementwise, or has a
        materially negative eigenvalue.
    """
    R = np.asarray(R)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {R.shape}")
    asym = np.max(np.abs(R - R.conj().T)) if R.size else 0.0
    if asym > _HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3g})")
    herm = 0.5 * (R + R.conj().T)
    eigvals, eigvecs = np.linalg.eigh(herm)
    scale = max(np.linalg.norm(herm, 2), 1.0)
    if eigvals.size and eigvals[0] < -_NEG_EIG_TOL * scale:
        raise ValueError(f"matrix is not PSD (min eigenvalue {eigvals[0]:.3g})")
    root = (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.conj().T
    if not np.iscomplexobj(R):
        root = root.real
    return 0.5 * (root + root.conj().T)


def kronecker(a, b) -> np.ndarray:
    """Kronecker product of two vectors, ``a`` varying slowest."""
    return np.kron(np.ravel(a), np.ravel(b))


def quadratic_form(x, R) -> complex:
    """Return x^H R x."""
    x = np.ravel(np.asarray(x))
    R = np.asarray(R)
    if R.ndim != 2 or R.shape != (x.size, x.size):
        raise ValueError(f"dimension mismatch: vector {x.size}, matrix {R.shape}")
    return complex(np.vdot(x, R @ x))
