"""Descent along the positive Hermitian slice of the GL(V)-orbit towards a
prescribed level of the real moment map."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, expm_frechet

from .hyperkahler import LevelSpec, complex_residual, real_moment, stable_side_sign
from .quiver import GaugeElement, Representation, act
from .stability import is_costable, is_regular, is_stable


MAX_MOVE = 0.5


class FlowPreconditionError(ValueError):
    pass


@dataclass
class FlowResult:
    g: GaugeElement
    residual: float
    iterations: int
    converged: bool
    level: float
    stable_side_sign: float
    objective_history: list = field(default_factory=list)
    max_complex_residual: float = 0.0

    def to_json(self):
        from .serialization import encode_group
        return {"g": encode_group(self.g), "residual": self.residual, "iterations": self.iterations,
                "converged": self.converged, "level": self.level,
                "stable_side_sign": self.stable_side_sign,
                "max_complex_residual": self.max_complex_residual}


def _herm(M):
    return 0.5 * (M + M.conj().T)


def _exp_blocks(s):
    return GaugeElement({v: expm(M) if M.size else M for v, M in s.items()})


def objective(X: Representation, s, level: LevelSpec):
    Y = act(_exp_blocks(s), None, X)
    mu = real_moment(Y)
    return float(sum(np.linalg.norm(M - level.target(M.shape[0])) ** 2 for M in mu.values()))


def _left_gradient(Y: Representation, level: LevelSpec):
    """Derivative of the objective along xi . Y, as a matrix pairing with xi per vertex."""
    mu = real_moment(Y)
    H = {v: (-1j * (M - level.target(M.shape[0]))) for v, M in mu.items()}
    q = Y.quiver
    G = {v: np.zeros_like(M) for v, M in mu.items()}
    for a in q.arrows:
        A, B = Y.A[a.id], Y.B[a.id]
        gA = 2 * (H[a.head] @ A - A @ H[a.tail])
        gB = 2 * (H[a.tail] @ B - B @ H[a.head])
        G[a.head] = G[a.head] + gA @ A.conj().T - B.conj().T @ gB
        G[a.tail] = G[a.tail] - A.conj().T @ gA + gB @ B.conj().T
    for v in q.vertices:
        I, J = Y.I[v], Y.J[v]
        gI = 2 * H[v] @ I
        gJ = -2 * J @ H[v]
        G[v] = G[v] + gI @ I.conj().T - J.conj().T @ gJ
    return G


def gradient(X: Representation, s, level: LevelSpec):
    """Gradient of the objective with respect to Hermitian s (Frobenius inner product)."""
    Y = act(_exp_blocks(s), None, X)
    G = _left_gradient(Y, level)
    out = {}
    for v, M in s.items():
        if M.size == 0:
            out[v] = M
            continue
        inv = expm(-M)
        out[v] = _herm(expm_frechet(M, G[v] @ inv, compute_expm=False))
    return out


def _inner(a, b):
    return float(sum(np.vdot(a[v], b[v]).real for v in a))


def _axpy(alpha, x, y):
    return {v: y[v] + alpha * x[v] for v in y}


def check_preconditions(X: Representation, level: LevelSpec):
    if complex_residual(X) > 1e-8 * max(1.0, X.norm() ** 2):
        raise FlowPreconditionError("input does not satisfy the complex moment equation")
    side = level.c * stable_side_sign()
    if side > 0 and not is_stable(X):
        raise FlowPreconditionError("a positive level needs stable input")
    if side < 0 and not is_costable(X):
        raise FlowPreconditionError("a negative level needs costable input")
    if side == 0 and not is_regular(X):
        raise FlowPreconditionError("level zero needs regular input")


def flow_to_level(X: Representation, level: LevelSpec | float = 0.5, tol=1e-10, max_iters=10_000,
                  symmetrize_for=None, track_complex=False):
    """Minimize the level defect over g = exp(s), s Hermitian per vertex.

    ``symmetrize_for`` takes an involution spec; the final s is averaged with
    its image under the spec's Lie-algebra automorphism so that exact fixed
    points stay exact.
    """
    if not isinstance(level, LevelSpec):
        level = LevelSpec(float(level))
    check_preconditions(X, level)
    s = {v: np.zeros((n, n), dtype=complex) for v, n in X.dims.V.items()}
    f = objective(X, s, level)
    history = [f]
    grad = gradient(X, s, level)
    step = 1.0 / max(1.0, X.norm() ** 2)
    prev_s, prev_grad = None, None
    max_cres = complex_residual(X) if track_complex else 0.0
    iters = 0
    while np.sqrt(f) > tol and iters < max_iters:
        gn2 = _inner(grad, grad)
        if gn2 == 0.0:
            break
        if prev_s is not None:
            ds = {v: s[v] - prev_s[v] for v in s}
            dg = {v: grad[v] - prev_grad[v] for v in s}
            denom = _inner(ds, dg)
            if denom > 0:
                step = _inner(ds, ds) / denom
        # the objective is not convex in s; cap the move to stay in the basin
        step = min(step, MAX_MOVE / np.sqrt(gn2))
        accepted = False
        for _ in range(60):
            trial = _axpy(-step, grad, s)
            ft = objective(X, trial, level)
            if ft <= f - 1e-4 * step * gn2 and ft < f:
                accepted = True
                break
            step *= 0.5
        iters += 1
        if not accepted:
            break
        prev_s, prev_grad = s, grad
        s, f = trial, ft
        history.append(f)
        grad = gradient(X, s, level)
        if track_complex:
            max_cres = max(max_cres, complex_residual(act(_exp_blocks(s), None, X)))
    if symmetrize_for is not None:
        sym = symmetrize_for.lie_automorphism(s)
        s = {v: _herm(0.5 * (s[v] + sym[v])) for v in s}
        f = objective(X, s, level)
    g = _exp_blocks(s)
    residual = float(np.sqrt(f))
    return FlowResult(g, residual, iters, residual <= tol, level.c, stable_side_sign(),
                      history, max_cres)


def flowed(X: Representation, result: FlowResult) -> Representation:
    return act(result.g, None, X)
