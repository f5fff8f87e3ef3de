"""Jordan-quiver ADHM data, the monad on the projective plane evaluated
fiberwise, the framing at the line {x0 = 0}, and the involutions of the plane
together with their monad-isomorphism squares."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hyperkahler import complex_moment
from .linalg import null_space, numerical_rank, orth
from .quiver import QuiverError, Representation

ADHM_TOL = 1e-8


class ADHMError(ValueError):
    pass


class PointError(ValueError):
    pass


@dataclass(frozen=True)
class P2Point:
    x0: complex
    x1: complex
    x2: complex

    def __post_init__(self):
        v = self.vector
        if not np.all(np.isfinite(v)) or np.linalg.norm(v) == 0:
            raise PointError("projective point needs a finite nonzero coordinate vector")

    @classmethod
    def of(cls, coords):
        x0, x1, x2 = (complex(c) for c in coords)
        return cls(x0, x1, x2)

    @property
    def vector(self):
        return np.array([self.x0, self.x1, self.x2], dtype=complex)

    def normalized(self):
        v = self.vector / np.linalg.norm(self.vector)
        return P2Point.of(v)

    def same_as(self, other, tol=1e-10):
        u, w = self.vector, other.vector
        return np.linalg.matrix_rank(np.vstack([u, w]), tol=tol * max(np.linalg.norm(u), np.linalg.norm(w))) == 1

    def on_line_at_infinity(self, tol=1e-14):
        return abs(self.x0) <= tol * np.linalg.norm(self.vector)

    def __repr__(self):
        return f"[{self.x0:.4g} : {self.x1:.4g} : {self.x2:.4g}]"


COORDINATE_POINTS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1)]


def sample_points(count, seed, include_special=True):
    """Seeded uniform points of the unit sphere in C^3, plus coordinate points."""
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((count, 3)) + 1j * rng.standard_normal((count, 3))
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    pts = [P2Point.of(z) for z in Z]
    if include_special:
        pts += [P2Point.of(c) for c in COORDINATE_POINTS]
    return pts


def _require_jordan(X):
    if not X.quiver.is_jordan:
        raise QuiverError("monad construction needs the Jordan quiver")
    return X.jordan_blocks


def adhm_residual(X: Representation):
    _require_jordan(X)
    return complex_moment(X)[X.quiver.vertices[0]]


def _check_adhm(X, tol=ADHM_TOL):
    res = adhm_residual(X)
    scale = max(1.0, X.norm() ** 2)
    if np.linalg.norm(res) > tol * scale:
        raise ADHMError(f"ADHM residual {np.linalg.norm(res):.3g} exceeds tolerance")


@dataclass(frozen=True)
class MonadEvaluation:
    alpha: np.ndarray
    beta: np.ndarray
    point: P2Point

    @property
    def alpha_rank(self):
        return numerical_rank(self.alpha)

    @property
    def beta_rank(self):
        return numerical_rank(self.beta)

    @property
    def fiber_dim(self):
        return self.beta.shape[1] - self.beta_rank - self.alpha_rank


def alpha_matrix(X, p: P2Point):
    A, B, I, J = _require_jordan(X)
    n = A.shape[0]
    one = np.eye(n)
    return np.vstack([p.x0 * A - p.x1 * one, p.x0 * B - p.x2 * one, p.x0 * J])


def beta_matrix(X, p: P2Point):
    A, B, I, J = _require_jordan(X)
    n = A.shape[0]
    one = np.eye(n)
    return np.hstack([-p.x0 * B + p.x2 * one, p.x0 * A - p.x1 * one, p.x0 * I])


def monad_at(X: Representation, p: P2Point) -> MonadEvaluation:
    return MonadEvaluation(alpha_matrix(X, p), beta_matrix(X, p), p)


def fiber_dim(X: Representation, p: P2Point, check=True) -> int:
    if check:
        _check_adhm(X)
    return monad_at(X, p).fiber_dim


def framing_check(X: Representation, p: P2Point) -> float:
    """Condition number of the projection of ker(beta)/im(alpha) onto W at a point of x0 = 0."""
    if not p.on_line_at_infinity():
        raise PointError("framing is only defined on the line x0 = 0")
    ev = monad_at(X, p)
    K = null_space(ev.beta)
    if ev.alpha_rank:
        im = orth(ev.alpha)
        K = orth(K - im @ (im.conj().T @ K))
    n = X.dims.V[X.quiver.vertices[0]]
    W_block = K[2 * n:, :]
    if W_block.shape[0] != W_block.shape[1]:
        return float("inf")
    if W_block.size == 0:
        return 1.0
    s = np.linalg.svd(W_block, compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] > 0 else float("inf")


def spectral_points(X: Representation):
    """Points [1 : lambda : nu] for eigenvalues lambda of A and nu of B.

    Joint eigen-covectors of (A, B) killing I, where beta drops rank, sit over such points.
    """
    A, B, _, _ = _require_jordan(X)
    if A.shape[0] == 0:
        return []
    la = np.linalg.eigvals(A)
    nu = np.linalg.eigvals(B)
    return [P2Point.of((1.0, a, b)) for a in la for b in nu]


def beta_surjective_everywhere(X: Representation, samples=1000, seed=0):
    n = X.dims.V[X.quiver.vertices[0]]
    for p in sample_points(samples, seed) + spectral_points(X):
        if monad_at(X, p).beta_rank < n:
            return False
    return True


# -- involutions of the plane ----------------------------------------------

@dataclass(frozen=True)
class P2Involution:
    kind: str
    t: float = 1.0
    z: complex = 0.0

    KINDS = ("sigma1", "sigma2", "tau0", "tau1", "tau2")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown plane involution {self.kind!r}")
        object.__setattr__(self, "z", complex(self.z))
        if self.kind in ("sigma2", "tau2") and abs(self.t ** 2 + abs(self.z) ** 2 - 1) > 1e-12:
            raise ValueError("t^2 + |z|^2 must equal 1")

    @property
    def antiholomorphic(self):
        return self.kind.startswith("tau")

    @property
    def holomorphic_part(self):
        return {"sigma1": "sigma1", "sigma2": "sigma2", "tau0": None,
                "tau1": "sigma1", "tau2": "sigma2"}[self.kind]

    def _holomorphic(self, v):
        part = self.holomorphic_part
        if part == "sigma1":
            return np.array([-v[0], v[1], v[2]])
        if part == "sigma2":
            t, z = self.t, self.z
            return np.array([v[0], t * v[1] + z * v[2], np.conj(z) * v[1] - t * v[2]])
        return v

    def __call__(self, p: P2Point) -> P2Point:
        v = self._holomorphic(p.vector)
        return P2Point.of(np.conj(v) if self.antiholomorphic else v)


def pullback_spec(inv: P2Involution):
    """Untwisted letter part of the involution on ADHM data matching ``inv``."""
    from .involutions import (DeltaAssignment, GammaAssignment, InvolutionSpec,
                              c, d, e)
    from .quiver import jordan_quiver
    q = jordan_quiver()
    word = []
    if inv.antiholomorphic:
        word.append(e)
    part = inv.holomorphic_part
    if part == "sigma1":
        word.append(c(GammaAssignment.constant(q, -1)))
    elif part == "sigma2":
        word.append(d(DeltaAssignment({"a": (inv.t, inv.z)}, {}, {"0": 1.0})))
    return InvolutionSpec(word)


def _square_data(inv: P2Involution, n, r):
    """(D, eps) with alpha^Y(p) eps = D alpha^X(pi p) and beta^Y(p) D = beta^X(pi p), untwisted."""
    part = inv.holomorphic_part
    if part == "sigma2":
        M = np.array([[inv.t, inv.z], [np.conj(inv.z), -inv.t]])
        D = np.zeros((2 * n + r, 2 * n + r), dtype=complex)
        D[:2 * n, :2 * n] = -np.kron(M, np.eye(n))
        D[2 * n:, 2 * n:] = np.eye(r)
        return D, -1.0
    return np.eye(2 * n + r, dtype=complex), 1.0


def verify_monad_square(spec, inv: P2Involution, X: Representation, sample_count=50, seed=0):
    """Max normalized defect of both squares over sampled points."""
    from .involutions import apply
    expected = pullback_spec(inv)
    if spec.letters != expected.letters:
        raise ValueError(f"spec word {spec.letters!r} does not match {inv.kind}")
    for w in spec.word:
        ref = expected.letter(w.name)
        if w.to_json() != ref.to_json():
            raise ValueError(f"letter {w.name} parameters do not match {inv.kind}")
    if inv.kind == "tau2" and abs(inv.z.imag) > 1e-12:
        raise ValueError("tau2 needs real z to be an involution")
    _check_adhm(X)
    A = X.jordan_blocks[0]
    n, r = A.shape[0], X.jordan_blocks[2].shape[1]
    g, h = spec.twist(X.dims)
    g0, h0 = g["0"], h["0"]
    D, eps = _square_data(inv, n, r)
    frame = np.zeros_like(D)
    frame[:n, :n] = g0
    frame[n:2 * n, n:2 * n] = g0
    frame[2 * n:, 2 * n:] = np.linalg.inv(h0) if r else h0
    f = frame @ D
    Y = apply(spec, X)
    scale = max(1.0, X.norm())
    worst = 0.0
    for p in sample_points(sample_count, seed, include_special=False):
        q = inv(p)
        aX, bX = alpha_matrix(X, q), beta_matrix(X, q)
        if inv.antiholomorphic:
            aX, bX = np.conj(aX), np.conj(bX)
        res_a = np.linalg.norm(alpha_matrix(Y, p) @ (eps * g0) - f @ aX)
        res_b = np.linalg.norm(beta_matrix(Y, p) @ f - g0 @ bX)
        worst = max(worst, res_a / scale, res_b / scale)
    return float(worst)
