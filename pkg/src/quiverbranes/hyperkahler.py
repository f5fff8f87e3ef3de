"""Flat hyperkähler structure on the representation space.

The metric is the real part of the Hermitian inner product, so it equals the
Euclidean dot product of the real flattenings.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quiver import Representation, ShapeError


def _check_shapes(X: Representation, Y: Representation):
    for (c, key), M in X.blocks():
        other = getattr(Y, c).get(key)
        if other is None or other.shape != M.shape:
            raise ShapeError(f"shape mismatch at {c}[{key}]")


def metric(X: Representation, Y: Representation) -> float:
    _check_shapes(X, Y)
    return float(sum(np.vdot(getattr(Y, c)[key], M).real for (c, key), M in X.blocks()))


def _adj(M):
    return M.conj().T


def gamma(k: int, X: Representation) -> Representation:
    """Complex structure k in {1, 2, 3}."""
    if k == 1:
        return X * 1j
    if k == 2:
        s = 1.0
    elif k == 3:
        s = 1j
    else:
        raise ValueError("complex structure index must be 1, 2 or 3")
    q = X.quiver
    return X.replace(
        A={a.id: -s * _adj(X.B[a.id]) for a in q.arrows},
        B={a.id: s * _adj(X.A[a.id]) for a in q.arrows},
        I={v: -s * _adj(X.J[v]) for v in q.vertices},
        J={v: s * _adj(X.I[v]) for v in q.vertices},
    )


def omega(k: int, X: Representation, Y: Representation) -> float:
    return metric(X, gamma(k, Y))


def gamma_matrix(k, q, d):
    """Real matrix of gamma(k, .) acting on flattened vectors."""
    Z = Representation.zeros(q, d)
    m = Z.real_dim
    cols = []
    for j in range(m):
        e = np.zeros(m)
        e[j] = 1.0
        cols.append(gamma(k, Representation.from_flat(q, d, e)).flatten())
    return np.array(cols).T


@dataclass(frozen=True)
class MomentValues:
    mu1: dict
    mu2: dict
    mu3: dict
    muC: dict

    def as_dict(self):
        return {"mu1": self.mu1, "mu2": self.mu2, "mu3": self.mu3, "muC": self.muC}

    def norm(self, which):
        vals = getattr(self, which)
        return float(np.sqrt(sum(np.linalg.norm(M) ** 2 for M in vals.values())))


@dataclass(frozen=True)
class LevelSpec:
    """Target value i*c*1 for mu3 at every vertex; mu1 and mu2 target zero."""
    c: float = 0.5

    def __post_init__(self):
        if not np.isfinite(self.c):
            raise ValueError("level must be finite")

    def target(self, n):
        return 1j * self.c * np.eye(n)


def _zeros(X):
    return {v: np.zeros((X.dims.V[v],) * 2, dtype=complex) for v in X.quiver.vertices}


def commutator_terms(X: Representation):
    """Per-vertex [A, B]: sum over arrows into i of A B minus arrows out of i of B A."""
    out = _zeros(X)
    for a in X.quiver.arrows:
        A, B = X.A[a.id], X.B[a.id]
        out[a.head] = out[a.head] + A @ B
        out[a.tail] = out[a.tail] - B @ A
    return out


def complex_moment(X: Representation):
    comm = commutator_terms(X)
    return {v: comm[v] + X.I[v] @ X.J[v] for v in X.quiver.vertices}


def real_moment(X: Representation):
    """mu3 = i/2 ([A,A*] + [B,B*] + II* - J*J), summed along the quiver."""
    acc = _zeros(X)
    for a in X.quiver.arrows:
        A, B = X.A[a.id], X.B[a.id]
        acc[a.head] = acc[a.head] + A @ _adj(A) - _adj(B) @ B
        acc[a.tail] = acc[a.tail] - _adj(A) @ A + B @ _adj(B)
    return {v: 0.5j * (acc[v] + X.I[v] @ _adj(X.I[v]) - _adj(X.J[v]) @ X.J[v])
            for v in X.quiver.vertices}


def moment_maps(X: Representation) -> MomentValues:
    comm = commutator_terms(X)
    adj_comm = _zeros(X)
    for a in X.quiver.arrows:
        A, B = X.A[a.id], X.B[a.id]
        adj_comm[a.tail] = adj_comm[a.tail] + _adj(A) @ _adj(B)
        adj_comm[a.head] = adj_comm[a.head] - _adj(B) @ _adj(A)
    mu1, mu2 = {}, {}
    for v in X.quiver.vertices:
        IJ = X.I[v] @ X.J[v]
        JsIs = _adj(X.J[v]) @ _adj(X.I[v])
        mu1[v] = -0.5 * (comm[v] + adj_comm[v] + IJ - JsIs)
        mu2[v] = -(comm[v] - adj_comm[v] + IJ + JsIs) / 2j
    return MomentValues(mu1, mu2, real_moment(X), complex_moment(X))


def level_residual(X: Representation, level: LevelSpec) -> float:
    mu3 = real_moment(X)
    return float(np.sqrt(sum(np.linalg.norm(M - level.target(M.shape[0])) ** 2 for M in mu3.values())))


def complex_residual(X: Representation) -> float:
    return float(np.sqrt(sum(np.linalg.norm(M) ** 2 for M in complex_moment(X).values())))


def stable_side_sign() -> float:
    """Sign of c for which mu3 = i c 1 is attained on the stable side.

    Probed on the simplest stable datum: one vertex, one framing, I = 1.
    """
    X =Representation.jordan([[0]], [[0]], [[1]], [[0]])
    val = real_moment(X)["0"][0, 0]
    return float(np.sign(val.imag))
