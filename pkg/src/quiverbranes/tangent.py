"""Tangent spaces of the hyperkähler quotient at regular points and the
fixed subspaces of linear involutions on them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hyperkahler import (LevelSpec, complex_residual, gamma_matrix, level_residual,
                          moment_maps)
from .linalg import null_space, orth
from .quiver import Representation, infinitesimal_action
from .stability import is_regular

TANGENT_RTOL = 1e-8


class TangentPreconditionError(ValueError):
    pass


class NotExactFixedPoint(ValueError):
    pass


@dataclass(frozen=True)
class TangentFrame:
    ambient_dim: int
    horizontal_basis: np.ndarray  # columns, real flattened vectors
    quotient_dim: int
    level: float


def unitary_lie_basis(n):
    """Real basis of anti-Hermitian n x n matrices."""
    out = []
    for j in range(n):
        M = np.zeros((n, n), dtype=complex)
        M[j, j] = 1j
        out.append(M)
        for k in range(j + 1, n):
            M = np.zeros((n, n), dtype=complex)
            M[j, k], M[k, j] = 1, -1
            out.append(M)
            M = np.zeros((n, n), dtype=complex)
            M[j, k], M[k, j] = 1j, 1j
            out.append(M)
    return out


def _orbit_vectors(X: Representation):
    zero = {v: np.zeros((n, n), dtype=complex) for v, n in X.dims.V.items()}
    cols = []
    for v in X.quiver.vertices:
        for M in unitary_lie_basis(X.dims.V[v]):
            xi = dict(zero)
            xi[v] = M
            cols.append(infinitesimal_action(xi, X).flatten())
    m = X.real_dim
    return np.array(cols).T if cols else np.zeros((m, 0))


def orbit_directions(X: Representation, rtol=TANGENT_RTOL):
    """Orthonormal real basis of the tangent to the U(V)-orbit."""
    V = _orbit_vectors(X)
    if V.shape[1] == 0 or np.linalg.norm(V) == 0:
        return np.zeros((X.real_dim, 0))
    return orth(V, rtol)


def _moment_vector(mv, which):
    parts = []
    for M in getattr(mv, which).values():
        parts.append(M.real.ravel())
        parts.append(M.imag.ravel())
    return np.concatenate(parts) if parts else np.zeros(0)


def moment_differential(X: Representation):
    """Real matrix of t -> (dmu1, dmu2, dmu3)(X)[t]; exact because the maps are quadratic."""
    q, d = X.quiver, X.dims
    m = X.real_dim
    base = moment_maps(X)
    rows = None
    for j in range(m):
        e_j = np.zeros(m)
        e_j[j] = 1.0
        T = Representation.from_flat(q, d, e_j)
        plus = moment_maps(X + T)
        alone = moment_maps(T)
        col = np.concatenate([_moment_vector(plus, k) - _moment_vector(base, k) - _moment_vector(alone, k)
                              for k in ("mu1", "mu2", "mu3")])
        if rows is None:
            rows = np.empty((col.size, m))
        rows[:, j] = col
    return rows


def check_preconditions(X: Representation, level: LevelSpec):
    if not is_regular(X):
        raise TangentPreconditionError("tangent computation needs a regular point")
    if complex_residual(X) > 1e-8:
        raise TangentPreconditionError("complex moment map does not vanish")
    if level_residual(X, level) > 1e-6:
        raise TangentPreconditionError("point is not on the requested level; flow it first")


def quotient_tangent(X: Representation, level: LevelSpec | float = 0.5, check=True) -> TangentFrame:
    """Horizontal space ker dmu1 ∩ ker dmu2 ∩ ker dmu3 ∩ (orbit)^perp."""
    if not isinstance(level, LevelSpec):
        level = LevelSpec(float(level))
    if check:
        check_preconditions(X, level)
    D = moment_differential(X)
    O = orbit_directions(X)
    system = np.vstack([D, O.T]) if O.shape[1] else D
    scale = max(1.0, np.abs(system).max(initial=0.0))
    H = null_space(system / scale, rtol=0.0, atol=TANGENT_RTOL)
    return TangentFrame(X.real_dim, H, H.shape[1], level.c)


def horizontal_by_rotation(X: Representation):
    """Complement of the orbit directions rotated by all three complex structures."""
    O = _orbit_vectors(X)
    q, d = X.quiver, X.dims
    cols = [O]
    for k in (1, 2, 3):
        G = gamma_matrix(k, q, d)
        cols.append(G @ O)
    span = orth(np.hstack(cols), TANGENT_RTOL)
    return null_space(span.T, rtol=0.0, atol=TANGENT_RTOL)


@dataclass(frozen=True)
class FixedSubspace:
    real_dim: int
    type_tag: str
    basis: np.ndarray
    horizontal_defect: float

    def to_json(self):
        return {"fixed_real_dim": self.real_dim, "brane_type": self.type_tag,
                "horizontal_defect": self.horizontal_defect}


def fixed_subspace(spec, X: Representation, frame: TangentFrame, tol=1e-8) -> FixedSubspace:
    from .involutions import apply, brane_type, linear_matrix
    if apply(spec, X).distance(X) > tol * max(1.0, X.norm()):
        raise NotExactFixedPoint("the point is not an exact fixed point of the involution")
    S = linear_matrix(spec, X.quiver, X.dims)
    H = frame.horizontal_basis
    P = H @ H.T
    Q = P @ (0.5 * (np.eye(S.shape[0]) + S)) @ P
    Q = 0.5 * (Q + Q.T)
    w, U = np.linalg.eigh(Q)
    F = U[:, w > 0.5]
    defect = float(np.linalg.norm(S @ H - P @ S @ H))
    return FixedSubspace(int(F.shape[1]), brane_type(spec), F, defect)


def fixed_subspace_dim(spec, X: Representation, frame: TangentFrame):
    fs = fixed_subspace(spec, X, frame)
    return {"real_dim": fs.real_dim, "type_tag": fs.type_tag}


def structure_checks(spec, X: Representation, fixed: FixedSubspace):
    """Per complex structure: isotropy defect of omega_k and Gamma_k-invariance defect on the fixed subspace."""
    F = fixed.basis
    q, d = X.quiver, X.dims
    out = {}
    for k in (1, 2, 3):
        G = gamma_matrix(k, q, d)
        GF = G @ F
        omega_defect = float(np.abs(F.T @ GF).max(initial=0.0))
        invariance_defect = float(np.linalg.norm(GF - F @ (F.T @ GF)))
        out[k] = {"omega_defect": omega_defect, "invariance_defect": invariance_defect}
    return out


def default_level(spec) -> float:
    """Level-flipping words are examined at level 0, the rest at level 1/2."""
    from .involutions import level_preserving
    return 0.5 if level_preserving(spec) else 0.0
