"""Quivers, dimension data, representations of the framed double quiver and
the gauge/frame group actions on them.

A representation ``X = (A, B, I, J)`` stores, for every arrow ``a: t -> h``,
``A[a]`` of shape ``(n_h, n_t)`` and the reversed-arrow block ``B[a]`` of
shape ``(n_t, n_h)`` (keyed by the original arrow id), and for every vertex
``i`` the framing blocks ``I[i]`` of shape ``(n_i, r_i)`` and ``J[i]`` of
shape ``(r_i, n_i)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .linalg import is_unitary

DEFAULT_TOL = 1e-10


class QuiverError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class InvalidGroupElement(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        ids = [a.id for a in arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError("duplicate arrow ids")
        vs = set(self.vertices)
        for a in arrows:
            if a.tail not in vs or a.head not in vs:
                raise QuiverError(f"arrow {a.id!r} has an undeclared endpoint")

    @property
    def loops(self):
        return tuple(a for a in self.arrows if a.is_loop)

    @property
    def non_loops(self):
        return tuple(a for a in self.arrows if not a.is_loop)

    def arrow(self, arrow_id):
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise KeyError(arrow_id)

    def double(self):
        """Arrow list of the double quiver: each arrow followed by its reverse."""
        out = []
        for a in self.arrows:
            out.append(a)
            out.append(Arrow(a.id + "~", a.head, a.tail))
        return out

    @property
    def is_jordan(self) -> bool:
        return len(self.vertices) == 1 and len(self.arrows) == 1 and self.arrows[0].is_loop


def jordan_quiver() -> Quiver:
    return Quiver(("0",), (Arrow("a", "0", "0"),))


@dataclass(frozen=True)
class DimensionData:
    V: Mapping
    W: Mapping

    def __post_init__(self):
        object.__setattr__(self, "V", {str(k): int(v) for k, v in self.V.items()})
        object.__setattr__(self, "W", {str(k): int(v) for k, v in self.W.items()})
        if any(v < 0 for v in self.V.values()) or any(w < 0 for w in self.W.values()):
            raise QuiverError("dimensions must be nonnegative")

    @classmethod
    def jordan(cls, n, r):
        return cls({"0": n}, {"0": r})

    def check_against(self, q: Quiver):
        for v in q.vertices:
            if v not in self.V or v not in self.W:
                raise QuiverError(f"dimension data missing vertex {v!r}")
        if not any(self.V[v] > 0 for v in q.vertices):
            raise QuiverError("at least one vertex needs dimV > 0")

    def __hash__(self):
        return hash((tuple(sorted(self.V.items())), tuple(sorted(self.W.items()))))


def _frozen(M):
    M = np.array(M, dtype=complex)
    M.flags.writeable = False
    return M


def expected_shapes(q: Quiver, d: DimensionData):
    """Mapping (component, key) -> shape for every block of a representation."""
    shapes = {}
    for a in q.arrows:
        shapes[("A", a.id)] = (d.V[a.head], d.V[a.tail])
    for a in q.arrows:
        shapes[("B", a.id)] = (d.V[a.tail], d.V[a.head])
    for v in q.vertices:
        shapes[("I", v)] = (d.V[v], d.W[v])
    for v in q.vertices:
        shapes[("J", v)] = (d.W[v], d.V[v])
    return shapes


@dataclass(frozen=True, eq=False)
class Representation:
    quiver: Quiver
    dims: DimensionData
    A: Mapping = field(default_factory=dict)
    B: Mapping = field(default_factory=dict)
    I: Mapping = field(default_factory=dict)
    J: Mapping = field(default_factory=dict)

    def __post_init__(self):
        for name in "ABIJ":
            blocks = {str(k): _frozen(v) for k, v in getattr(self, name).items()}
            object.__setattr__(self, name, blocks)

    @classmethod
    def build(cls, q, d, A, B, I, J):
        """Construct and validate; raises ShapeError on any violation."""
        X = cls(q, d, A, B, I, J)
        bad = validate_representation(q, d, X)
        if bad:
            raise ShapeError("; ".join(bad))
        return X

    @classmethod
    def jordan(cls, A, B, I, J):
        A, B, I, J = (np.atleast_2d(np.asarray(M, dtype=complex)) for M in (A, B, I, J))
        n, r = A.shape[0], I.shape[1]
        return cls.build(jordan_quiver(), DimensionData.jordan(n, r),
                         {"a": A}, {"a": B}, {"0": I}, {"0": J})

    @classmethod
    def zeros(cls, q, d):
        sh = expected_shapes(q, d)
        parts = {c: {} for c in "ABIJ"}
        for (c, key), s in sh.items():
            parts[c][key] = np.zeros(s, dtype=complex)
        return cls(q, d, parts["A"], parts["B"], parts["I"], parts["J"])

    # -- block access -------------------------------------------------------
    def blocks(self):
        """Blocks in the fixed flattening order: A by arrow, B, I, J by vertex."""
        q = self.quiver
        for a in q.arrows:
            yield ("A", a.id), self.A[a.id]
        for a in q.arrows:
            yield ("B", a.id), self.B[a.id]
        for v in q.vertices:
            yield ("I", v), self.I[v]
        for v in q.vertices:
            yield ("J", v), self.J[v]

    def map_blocks(self, fn):
        parts = {c: {} for c in "ABIJ"}
        for (c, key), M in self.blocks():
            parts[c][key] = fn(M)
        return self.replace(**parts)

    def replace(self, **parts):
        kw = {c: parts.get(c, getattr(self, c)) for c in "ABIJ"}
        return Representation(self.quiver, self.dims, **kw)

    @property
    def jordan_blocks(self):
        if not self.quiver.is_jordan:
            raise QuiverError("not a Jordan-quiver representation")
        a = self.quiver.arrows[0].id
        v = self.quiver.vertices[0]
        return self.A[a], self.B[a], self.I[v], self.J[v]

    # -- real vector-space structure ----------------------------------------
    def _combine(self, other, op):
        parts = {c: {} for c in "ABIJ"}
        for (c, key), M in self.blocks():
            parts[c][key] = op(M, getattr(other, c)[key])
        return self.replace(**parts)

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __neg__(self):
        return self.map_blocks(np.negative)

    def __mul__(self, s):
        return self.map_blocks(lambda M: s * M)

    __rmul__ = __mul__

    def conj(self):
        return self.map_blocks(np.conj)

    def flatten(self):
        """Real vector: complex entries in block order (row-major), real parts then imaginary parts."""
        z = np.concatenate([M.ravel() for _, M in self.blocks()]) if self.quiver.arrows or self.quiver.vertices else np.zeros(0)
        return np.concatenate([z.real, z.imag])

    @classmethod
    def from_flat(cls, q, d, vec):
        vec = np.asarray(vec, dtype=float)
        m = vec.size // 2
        z = vec[:m] + 1j * vec[m:]
        parts = {c: {} for c in "ABIJ"}
        pos = 0
        for (c, key), s in expected_shapes(q, d).items():
            size = s[0] * s[1]
            parts[c][key] = z[pos:pos + size].reshape(s)
            pos += size
        return cls(q, d, parts["A"], parts["B"], parts["I"], parts["J"])

    @property
    def real_dim(self):
        return 2 * sum(M.size for _, M in self.blocks())

    def norm(self):
        return float(np.sqrt(sum(np.vdot(M, M).real for _, M in self.blocks())))

    def allclose(self, other, atol=1e-10):
        return all(np.allclose(M, getattr(other, c)[key], atol=atol, rtol=0.0)
                   for (c, key), M in self.blocks())

    def distance(self, other):
        return (self - other).norm()

    def is_real(self, tol=DEFAULT_TOL):
        return all(np.abs(M.imag).max(initial=0.0) <= tol for _, M in self.blocks())

    def __repr__(self):
        dv = ",".join(f"{v}:{self.dims.V[v]}" for v in self.quiver.vertices)
        dw = ",".join(f"{v}:{self.dims.W[v]}" for v in self.quiver.vertices)
        return f"Representation(V={{{dv}}}, W={{{dw}}}, norm={self.norm():.4g})"


def validate_representation(q: Quiver, d: DimensionData, X: Representation):
    """List of human-readable violations; empty when shapes and entries are sound."""
    out = []
    for v in q.vertices:
        if v not in d.V or v not in d.W:
            out.append(f"dimension data missing vertex {v!r}")
    if out:
        return out
    for (c, key), shape in expected_shapes(q, d).items():
        blocks = getattr(X, c)
        if key not in blocks:
            out.append(f"{c}[{key}] missing, expected shape {shape}")
            continue
        M = blocks[key]
        if M.shape != shape:
            out.append(f"{c}[{key}] has shape {M.shape}, expected {shape}")
        elif not np.all(np.isfinite(M)):
            out.append(f"{c}[{key}] has non-finite entries")
    for c in "ABIJ":
        known = {a.id for a in q.arrows} if c in "AB" else set(q.vertices)
        for key in getattr(X, c):
            if key not in known:
                out.append(f"{c}[{key}] does not correspond to any {'arrow' if c in 'AB' else 'vertex'}")
    return out


def random_representation(q: Quiver, d: DimensionData, seed: int) -> Representation:
    """Independent standard complex Gaussian entries, deterministic by seed."""
    rng = np.random.default_rng(seed)
    parts = {c: {} for c in "ABIJ"}
    for (c, key), s in expected_shapes(q, d).items():
        parts[c][key] = (rng.standard_normal(s) + 1j * rng.standard_normal(s)) / np.sqrt(2)
    return Representation(q, d, parts["A"], parts["B"], parts["I"], parts["J"])


class _GroupElement:
    _space = "V"

    def __init__(self, blocks, tol=DEFAULT_TOL):
        self.blocks = {str(k): _frozen(v) for k, v in blocks.items()}
        self.tol = tol
        for k, M in self.blocks.items():
            if M.ndim != 2 or M.shape[0] != M.shape[1]:
                raise InvalidGroupElement(f"block {k!r} is not square")
            if M.shape[0] and (not np.all(np.isfinite(M)) or np.linalg.cond(M) > 1e12):
                raise InvalidGroupElement(f"block {k!r} is not invertible")

    @classmethod
    def identity(cls, d: DimensionData):
        dims = d.V if cls._space == "V" else d.W
        return cls({v: np.eye(n) for v, n in dims.items()})

    @classmethod
    def random_unitary(cls, d: DimensionData, seed: int):
        rng = np.random.default_rng(seed)
        dims = d.V if cls._space == "V" else d.W
        out = {}
        for v, n in dims.items():
            Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            Q, R = np.linalg.qr(Z) if n else (np.zeros((0, 0)), np.zeros((0, 0)))
            if n:
                Q = Q * (np.diag(R) / np.abs(np.diag(R)))
            out[v] = Q
        return cls(out)

    @property
    def unitary_flag(self) -> bool:
        return all(is_unitary(M, self.tol) for M in self.blocks.values())

    def __getitem__(self, v):
        return self.blocks[v]

    def inverse(self):
        return type(self)({k: np.linalg.inv(M) if M.size else M for k, M in self.blocks.items()})

    def __matmul__(self, other):
        return type(self)({k: M @ other.blocks[k] for k, M in self.blocks.items()})

    def map(self, fn):
        return type(self)({k: fn(M) for k, M in self.blocks.items()})

    def allclose(self, other, atol=1e-8):
        return all(np.allclose(M, other.blocks[k], atol=atol, rtol=0.0) for k, M in self.blocks.items())

    def __repr__(self):
        return f"{type(self).__name__}({ {k: M.shape for k, M in self.blocks.items()} })"


class GaugeElement(_GroupElement):
    """Element of GL(V) = prod_i GL(V_i)."""
    _space = "V"


class FrameElement(_GroupElement):
    """Element of GL(W) = prod_i GL(W_i)."""
    _space = "W"


def _inv(M):
    return np.linalg.inv(M) if M.size else M


def act(g: GaugeElement, h: FrameElement | None, X: Representation) -> Representation:
    """(g, h) . X = (g A g^-1, g B g^-1, g I h, h^-1 J g^-1), blockwise along arrows."""
    q = X.quiver
    G = {v: g[v] for v in q.vertices}
    Gi = {v: _inv(G[v]) for v in q.vertices}
    if h is None:
        H = {v: np.eye(X.dims.W[v]) for v in q.vertices}
    else:
        H = {v: h[v] for v in q.vertices}
    Hi = {v: _inv(H[v]) for v in q.vertices}
    A = {a.id: G[a.head] @ X.A[a.id] @ Gi[a.tail] for a in q.arrows}
    B = {a.id: G[a.tail] @ X.B[a.id] @ Gi[a.head] for a in q.arrows}
    I = {v: G[v] @ X.I[v] @ H[v] for v in q.vertices}
    J = {v: Hi[v] @ X.J[v] @ Gi[v] for v in q.vertices}
    return X.replace(A=A, B=B, I=I, J=J)


def infinitesimal_action(xi: Mapping, X: Representation) -> Representation:
    """Derivative of the GL(V)-action in the Lie algebra direction xi (any complex matrices)."""
    q = X.quiver
    A = {a.id: xi[a.head] @ X.A[a.id] - X.A[a.id] @ xi[a.tail] for a in q.arrows}
    B = {a.id: xi[a.tail] @ X.B[a.id] - X.B[a.id] @ xi[a.head] for a in q.arrows}
    I = {v: xi[v] @ X.I[v] for v in q.vertices}
    J = {v: -X.J[v] @ xi[v] for v in q.vertices}
    return X.replace(A=A, B=B, I=I, J=J)


def kron_inflate(M, k):
    """Promote every entry of M to that multiple of the k x k identity."""
    return np.kron(np.asarray(M), np.eye(k))
