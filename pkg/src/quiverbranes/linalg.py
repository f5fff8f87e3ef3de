"""Small dense linear-algebra helpers shared across modules.

All rank decisions are relative: a singular value counts when it exceeds
``rtol`` times the largest singular value.
"""
from __future__ import annotations

import numpy as np

RANK_RTOL = 1e-8


def numerical_rank(M, rtol=RANK_RTOL):
    M = np.asarray(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def orth(M, rtol=RANK_RTOL):
    """Orthonormal basis (columns) of the column span of ``M``."""
    M = np.asarray(M)
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=M.dtype)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((M.shape[0], 0), dtype=U.dtype)
    k = int(np.sum(s > rtol * s[0]))
    return U[:, :k]


def null_space(M, rtol=RANK_RTOL, atol=0.0):
    """Orthonormal basis (columns) of the kernel of ``M``.

    ``atol`` is an absolute floor on the cut-off; use it when the matrix may
    be identically zero up to rounding.
    """
    M = np.asarray(M)
    n = M.shape[1]
    if M.shape[0] == 0 or n == 0:
        return np.eye(n, dtype=M.dtype if M.dtype.kind == "c" else float)
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    cut = max(rtol * (s[0] if s.size else 0.0), atol)
    k = int(np.sum(s > cut)) if s.size and s[0] > 0 else 0
    return Vh[k:].conj().T


def orth_complement(basis, dim):
    """Orthonormal basis of the orthogonal complement of span(basis) in R^dim or C^dim."""
    basis = np.asarray(basis)
    if basis.size == 0 or basis.shape[1] == 0:
        return np.eye(dim, dtype=basis.dtype if basis.dtype.kind == "c" else float)
    return null_space(basis.conj().T)


def is_unitary(M, tol=1e-10):
    M = np.asarray(M)
    if M.shape[0] == 0:
        return True
    return bool(np.allclose(M.conj().T @ M, np.eye(M.shape[0]), atol=tol, rtol=0.0))
