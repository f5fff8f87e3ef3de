"""Stability, costability and regularity through invariant-subspace closure."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import RANK_RTOL, orth
from .quiver import Representation


@dataclass(frozen=True)
class SubspaceCollection:
    basis: dict
    dims: dict
    history: list = field(default_factory=list)

    def is_full(self, dimV):
        return all(self.dims[v] == dimV[v] for v in dimV)

    def complement_dims(self, dimV):
        return {v: dimV[v] - self.dims[v] for v in dimV}


def _unit(M):
    n = np.linalg.norm(M)
    return M / n if n > 0 else M


def _closure(X: Representation, seeds, maps, rtol):
    """Smallest collection containing the seeds and closed under the maps.

    ``maps`` is a list of (source vertex, target vertex, matrix).
    """
    dimV = X.dims.V
    basis = {v: orth(_unit(seeds[v]), rtol) if seeds[v].size else np.zeros((dimV[v], 0), dtype=complex)
             for v in X.quiver.vertices}
    history = [{v: basis[v].shape[1] for v in basis}]
    budget = sum(dimV.values()) + 1
    for _ in range(budget):
        grown = {v: [basis[v]] for v in basis}
        for src, dst, M in maps:
            if basis[src].shape[1] and M.size:
                grown[dst].append(_unit(M) @ basis[src])
        new = {}
        for v, parts in grown.items():
            stacked = np.hstack(parts)
            new[v] = orth(stacked, rtol) if stacked.shape[1] else stacked
        dims = {v: new[v].shape[1] for v in new}
        basis = new
        if dims == history[-1]:
            break
        history.append(dims)
    return SubspaceCollection(basis, {v: basis[v].shape[1] for v in basis}, history)


def stable_closure(X: Representation, rtol=RANK_RTOL) -> SubspaceCollection:
    seeds = {v: X.I[v] for v in X.quiver.vertices}
    maps = []
    for a in X.quiver.arrows:
        maps.append((a.tail, a.head, X.A[a.id]))
        maps.append((a.head, a.tail, X.B[a.id]))
    return _closure(X, seeds, maps, rtol)


def costable_closure(X: Representation, rtol=RANK_RTOL) -> SubspaceCollection:
    """Smallest (A*, B*)-closed collection containing im J*; its complement is
    the largest (A, B)-invariant collection inside ker J."""
    seeds = {v: X.J[v].conj().T for v in X.quiver.vertices}
    maps = []
    for a in X.quiver.arrows:
        maps.append((a.head, a.tail, X.A[a.id].conj().T))
        maps.append((a.tail, a.head, X.B[a.id].conj().T))
    return _closure(X, seeds, maps, rtol)


def is_stable(X: Representation, rtol=RANK_RTOL) -> bool:
    return stable_closure(X, rtol).is_full(X.dims.V)


def is_costable(X: Representation, rtol=RANK_RTOL) -> bool:
    return costable_closure(X, rtol).is_full(X.dims.V)


def is_regular(X: Representation, rtol=RANK_RTOL) -> bool:
    return is_stable(X, rtol) and is_costable(X, rtol)


def stability_report(X: Representation, rtol=RANK_RTOL):
    st = stable_closure(X, rtol)
    ct = costable_closure(X, rtol)
    stable = st.is_full(X.dims.V)
    costable = ct.is_full(X.dims.V)
    return {"stable": stable, "costable": costable, "regular": stable and costable,
            "closure_dims": dict(st.dims),
            "costable_kernel_dims": ct.complement_dims(X.dims.V)}
