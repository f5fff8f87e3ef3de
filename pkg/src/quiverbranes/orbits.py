"""Intertwiners and GL(V)-orbit membership, solved as linear systems in k."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import null_space
from .quiver import GaugeElement, InvalidGroupElement, Representation, act
from .stability import is_stable

WITNESS_RTOL = 1e-8


class NotStableError(ValueError):
    pass


@dataclass(frozen=True)
class IntertwinerBasis:
    basis: list
    dimension: int


def _layout(X):
    offs, pos = {}, 0
    for v in X.quiver.vertices:
        n = X.dims.V[v]
        offs[v] = (pos, n)
        pos += n * n
    return offs, pos


def _block_row(offs, total, terms):
    """One block row; ``terms`` lists (vertex, coefficient matrix acting on vec(k_vertex))."""
    height = terms[0][1].shape[0]
    row = np.zeros((height, total), dtype=complex)
    for v, blk in terms:
        start, n = offs[v]
        row[:, start:start + n * n] += blk
    return row


def _conjugacy_system(X, Y):
    """Rows of k_head A^X - A^Y k_tail = 0 and k_tail B^X - B^Y k_head = 0.

    Uses vec(P k Q) = (P kron Q^t) vec(k) for row-major vec.
    """
    offs, total = _layout(X)
    rows = []
    for a in X.quiver.arrows:
        nh, nt = X.dims.V[a.head], X.dims.V[a.tail]
        if nh * nt == 0:
            continue
        rows.append(_block_row(offs, total, [(a.head, np.kron(np.eye(nh), X.A[a.id].T)),
                                             (a.tail, -np.kron(Y.A[a.id], np.eye(nt)))]))
        rows.append(_block_row(offs, total, [(a.tail, np.kron(np.eye(nt), X.B[a.id].T)),
                                             (a.head, -np.kron(Y.B[a.id], np.eye(nh)))]))
    return (np.vstack(rows) if rows else np.zeros((0, total), dtype=complex)), offs, total


def _framing_system(X, Y, offs, total):
    rows, rhs = [], []
    for v in X.quiver.vertices:
        n, r = X.dims.V[v], X.dims.W[v]
        if n == 0 or r == 0:
            continue
        rows.append(_block_row(offs, total, [(v, np.kron(np.eye(n), X.I[v].T))]))  # k I^X = I^Y
        rhs.append(Y.I[v].ravel())
        rows.append(_block_row(offs, total, [(v, np.kron(Y.J[v], np.eye(n)))]))  # J^Y k = J^X
        rhs.append(X.J[v].ravel())
    if not rows:
        return np.zeros((0, total), dtype=complex), np.zeros(0, dtype=complex)
    return np.vstack(rows), np.concatenate(rhs)


def _unpack(vec, offs):
    return {v: vec[s:s + n * n].reshape(n, n) for v, (s, n) in offs.items()}


def intertwiner_space(X: Representation, Y: Representation, rtol=1e-8) -> IntertwinerBasis:
    M, offs, total = _conjugacy_system(X, Y)
    scale = max(1.0, np.abs(M).max(initial=0.0))
    N = null_space(M / scale, rtol=0.0, atol=rtol) if M.shape[0] else np.eye(total, dtype=complex)
    basis = [_unpack(N[:, j], offs) for j in range(N.shape[1])]
    return IntertwinerBasis(basis, len(basis))


def orbit_witness(X: Representation, Y: Representation, rtol=WITNESS_RTOL, seed=0):
    """Invertible k with act(k, 1, X) = Y, or None."""
    if X.dims != Y.dims:
        return None
    M, offs, total = _conjugacy_system(X, Y)
    F, rhs = _framing_system(X, Y, offs, total)
    system = np.vstack([M, F])
    target = np.concatenate([np.zeros(M.shape[0], dtype=complex), rhs])
    data_norm = max(1.0, X.norm() + Y.norm())
    if total == 0:
        return GaugeElement({v: np.zeros((0, 0)) for v in X.quiver.vertices}) if X.allclose(Y) else None
    sol, *_ = np.linalg.lstsq(system, target, rcond=None)
    if np.linalg.norm(system @ sol - target) > rtol * data_norm:
        return None
    candidates = [sol]
    kernel = null_space(system, rtol=1e-10)
    if kernel.shape[1]:
        rng = np.random.default_rng(seed)
        for _ in range(5):
            coeffs = rng.standard_normal(kernel.shape[1]) + 1j * rng.standard_normal(kernel.shape[1])
            candidates.append(sol + kernel @ coeffs)
    for vec in candidates:
        blocks = _unpack(vec, offs)
        try:
            k = GaugeElement(blocks)
        except InvalidGroupElement:
            continue
        if act(k, None, X).distance(Y) <= rtol * data_norm:
            return k
    return None


def is_moduli_fixed(spec, X: Representation, rtol=WITNESS_RTOL):
    """Witness k with act(k, 1, X) = spec(X) when the orbit of X is fixed."""
    from .involutions import apply
    if not is_stable(X):
        raise NotStableError("moduli fixed-point test needs a stable representation")
    return orbit_witness(X, apply(spec, X), rtol)


def is_identity(k: GaugeElement, tol=1e-8) -> bool:
    return all(np.allclose(M, np.eye(M.shape[0]), atol=tol, rtol=0) for M in k.blocks.values())
