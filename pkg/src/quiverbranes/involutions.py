"""The involution letters b, c, d, e, their twists by (g, h), composed words,
commutation signatures with the complex structures and brane types."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .hyperkahler import gamma, moment_maps
from .quiver import (DimensionData, FrameElement, GaugeElement, Quiver,
                     Representation, act, random_representation)

INV_TOL = 1e-10


class SpecError(ValueError):
    pass


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class GammaAssignment:
    """Signs +-1 on arrows (scaling A and B) and on vertices (scaling I and J)."""
    arrows: Mapping
    vertices: Mapping

    def __post_init__(self):
        object.__setattr__(self, "arrows", {str(k): int(v) for k, v in self.arrows.items()})
        object.__setattr__(self, "vertices", {str(k): int(v) for k, v in self.vertices.items()})
        vals = list(self.arrows.values()) + list(self.vertices.values())
        if any(v not in (1, -1) for v in vals):
            raise SpecError("gamma signs must be +1 or -1")
        if vals and all(v == 1 for v in vals):
            raise SpecError("gamma must not be identically +1")

    @classmethod
    def constant(cls, q: Quiver, sign=-1):
        return cls({a.id: sign for a in q.arrows}, {v: sign for v in q.vertices})

    def check_total(self, q: Quiver):
        missing = [a.id for a in q.arrows if a.id not in self.arrows]
        missing += [v for v in q.vertices if v not in self.vertices]
        if missing:
            raise SpecError(f"gamma assignment missing {missing}")


@dataclass(frozen=True)
class DeltaAssignment:
    """Loop parameters (t, z) with t^2 + |z|^2 = 1; signs t on non-loop arrows and vertices."""
    loops: Mapping
    arrows: Mapping = field(default_factory=dict)
    vertices: Mapping = field(default_factory=dict)

    def __post_init__(self):
        loops = {}
        for k, (t, z) in self.loops.items():
            t, z = float(t), complex(z)
            if abs(t * t + abs(z) ** 2 - 1.0) > 1e-12:
                raise SpecError(f"loop {k!r}: t^2 + |z|^2 must equal 1")
            loops[str(k)] = (t, z)
        object.__setattr__(self, "loops", loops)
        for name in ("arrows", "vertices"):
            vals = {str(k): float(v) for k, v in getattr(self, name).items()}
            if any(v not in (1.0, -1.0) for v in vals.values()):
                raise SpecError(f"delta {name} parameters must be +1 or -1")
            object.__setattr__(self, name, vals)

    def check_total(self, q: Quiver):
        missing = [a.id for a in q.loops if a.id not in self.loops]
        missing += [a.id for a in q.non_loops if a.id not in self.arrows]
        missing += [v for v in q.vertices if v not in self.vertices]
        if missing:
            raise SpecError(f"delta assignment missing {missing}")

    @property
    def loops_real(self):
        return all(abs(z.imag) <= 1e-12 for _, z in self.loops.values())


# -- letters ---------------------------------------------------------------
# Each letter knows its action, its commutation signs with (Gamma1, Gamma2,
# Gamma3) and how it transforms gauge elements: letter(k . X) = phi(k) . letter(X).

class Letter:
    name = "?"
    signature = (1, 1, 1)

    def __call__(self, X: Representation) -> Representation:
        raise NotImplementedError

    def group_map(self, M):
        return M

    def lie_map(self, s):
        return s

    def to_json(self):
        return {"letter": self.name}

    def __eq__(self, other):
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class TransposeLetter(Letter):
    """b: transpose on loops, signed swap on non-loop arrows, (I, J) -> (J^t, -I^t)."""
    name = "b"

    def __call__(self, X):
        q = X.quiver
        A, B = {}, {}
        for a in q.arrows:
            if a.is_loop:
                A[a.id], B[a.id] = X.A[a.id].T, X.B[a.id].T
            else:
                A[a.id], B[a.id] = X.B[a.id].T, -X.A[a.id].T
        I = {v: X.J[v].T for v in q.vertices}
        J = {v: -X.I[v].T for v in q.vertices}
        return X.replace(A=A, B=B, I=I, J=J)

    def group_map(self, M):
        return np.linalg.inv(M).T if M.size else M

    def lie_map(self, s):
        return -s.T


class SignLetter(Letter):
    name = "c"

    def __init__(self, gamma: GammaAssignment):
        self.gamma = gamma

    def __call__(self, X):
        g = self.gamma
        q = X.quiver
        return X.replace(
            A={a.id: g.arrows[a.id] * X.A[a.id] for a in q.arrows},
            B={a.id: g.arrows[a.id] * X.B[a.id] for a in q.arrows},
            I={v: g.vertices[v] * X.I[v] for v in q.vertices},
            J={v: g.vertices[v] * X.J[v] for v in q.vertices},
        )

    def to_json(self):
        return {"letter": "c", "gamma": {"arrows": dict(self.gamma.arrows),
                                         "vertices": dict(self.gamma.vertices)}}


class MixingLetter(Letter):
    name = "d"
    signature = (1, -1, -1)

    def __init__(self, delta: DeltaAssignment):
        self.delta = delta

    def __call__(self, X):
        dl = self.delta
        q = X.quiver
        A, B = {}, {}
        for a in q.arrows:
            if a.is_loop:
                t, z = dl.loops[a.id]
            else:
                t, z = dl.arrows[a.id], 0.0
            A[a.id] = t * X.A[a.id] + z * X.B[a.id]
            B[a.id] = np.conj(z) * X.A[a.id] - t * X.B[a.id]
        I = {v: dl.vertices[v] * X.I[v] for v in q.vertices}
        J = {v: -dl.vertices[v] * X.J[v] for v in q.vertices}
        return X.replace(A=A, B=B, I=I, J=J)

    def to_json(self):
        dl = self.delta
        return {"letter": "d", "delta": {
            "loops": {k: {"t": t, "z": [z.real, z.imag]} for k, (t, z) in dl.loops.items()},
            "arrows": dict(dl.arrows), "vertices": dict(dl.vertices)}}


class ConjugationLetter(Letter):
    name = "e"
    signature = (-1, 1, -1)

    def __call__(self, X):
        return X.conj()

    def group_map(self, M):
        return np.conj(M)

    def lie_map(self, s):
        return np.conj(s)


b = TransposeLetter()
e = ConjugationLetter()


def c(gamma: GammaAssignment) -> SignLetter:
    return SignLetter(gamma)


def d(delta: DeltaAssignment) -> MixingLetter:
    return MixingLetter(delta)


def _signature_product(sigs):
    out = np.ones(3, dtype=int)
    for s in sigs:
        out = out * np.asarray(s)
    return tuple(int(x) for x in out)


class InvolutionSpec:
    """A word of letters (applied right to left) followed by the twist (g, h)."""

    def __init__(self, word, g: GaugeElement | None = None, h: FrameElement | None = None):
        self.word = tuple(word)
        kinds = [w.name for w in self.word]
        if len(set(kinds)) != len(kinds):
            raise SpecError("each letter kind may appear at most once")
        for w in self.word:
            if isinstance(w, MixingLetter) and ("b" in kinds or "e" in kinds):
                if not w.delta.loops_real:
                    raise SpecError("d combined with b or e needs real loop parameters z")
        self.g = g
        self.h = h

    @property
    def letters(self) -> str:
        return "".join(w.name for w in self.word)

    def has(self, name):
        return any(w.name == name for w in self.word)

    def letter(self, name):
        for w in self.word:
            if w.name == name:
                return w
        raise KeyError(name)

    def check(self, q: Quiver, d: DimensionData):
        for w in self.word:
            if isinstance(w, SignLetter):
                w.gamma.check_total(q)
            if isinstance(w, MixingLetter):
                w.delta.check_total(q)
        for name, el, dims in (("g", self.g, d.V), ("h", self.h, d.W)):
            if el is None:
                continue
            for v in q.vertices:
                if v not in el.blocks or el[v].shape != (dims[v], dims[v]):
                    raise SpecError(f"twist {name} block at vertex {v!r} has the wrong shape")

    def untwisted(self) -> "InvolutionSpec":
        return InvolutionSpec(self.word)

    def with_twist(self, g, h) -> "InvolutionSpec":
        return InvolutionSpec(self.word, g, h)

    def twist(self, d: DimensionData):
        g = self.g if self.g is not None else GaugeElement.identity(d)
        h = self.h if self.h is not None else FrameElement.identity(d)
        return g, h

    def letter_signature(self):
        return _signature_product(w.signature for w in self.word)

    def group_map(self, M, vertex=None):
        """Automorphism of GL induced by the untwisted word."""
        for w in reversed(self.word):
            M = w.group_map(M)
        return M

    def lie_map(self, s):
        for w in reversed(self.word):
            s = w.lie_map(s)
        return s

    def gauge_automorphism(self, k: GaugeElement) -> GaugeElement:
        """phi with spec(k . X) = phi(k) . spec(X) for gauge elements k."""
        out = {}
        for v, M in k.blocks.items():
            m = self.group_map(M)
            if self.g is not None:
                m = self.g[v] @ m @ np.linalg.inv(self.g[v]) if m.size else m
            out[v] = m
        return GaugeElement(out)

    def lie_automorphism(self, s: Mapping) -> dict:
        out = {}
        for v, M in s.items():
            m = self.lie_map(M)
            if self.g is not None and m.size:
                m = self.g[v] @ m @ np.linalg.inv(self.g[v])
            out[v] = m
        return out

    def to_json(self):
        from .serialization import encode_matrix
        out = {"word": [w.to_json() for w in self.word]}
        if self.g is not None:
            out["g"] = {k: encode_matrix(M) for k, M in self.g.blocks.items()}
        if self.h is not None:
            out["h"] = {k: encode_matrix(M) for k, M in self.h.blocks.items()}
        return out

    def __repr__(self):
        tw = "" if self.g is None and self.h is None else ", twisted"
        return f"InvolutionSpec({self.letters or 'id'}{tw})"


def apply(spec: InvolutionSpec, X: Representation) -> Representation:
    spec.check(X.quiver, X.dims)
    Y = X
    for w in reversed(spec.word):
        Y = w(Y)
    if spec.g is None and spec.h is None:
        return Y
    g, h = spec.twist(X.dims)
    return act(g, h, Y)


def linear_matrix(spec: InvolutionSpec, q: Quiver, d: DimensionData):
    """Real matrix of the (real-linear) map apply(spec, .) on flattened vectors."""
    m = Representation.zeros(q, d).real_dim
    cols = np.empty((m, m))
    for j in range(m):
        e_j = np.zeros(m)
        e_j[j] = 1.0
        cols[:, j] = apply(spec, Representation.from_flat(q, d, e_j)).flatten()
    return cols


# -- structural diagnostics ------------------------------------------------

TWIST_CONDITIONS = {
    "b": "g = ±g^t and h = ∓h^t",
    "c": "g^2 = e^{iξ} and h^2 = e^{-iξ}",
    "d": "g^2 = e^{iξ} and h^2 = e^{-iξ}",
    "e": "g = ±g^t and h = ±h^t",
    "eb": "g^2 = e^{iξ} and h^2 = e^{-iξ}",
    "ec": "g = ±g^t and h = ±h^t",
    "ebc": "g^2 = e^{iξ} and h^2 = e^{-iξ}",
    "ed": "g = ±g^t and h = ±h^t",
    "ebd": "g^2 = e^{iξ} and h^2 = e^{-iξ}",
}


def _canonical(letters):
    order = "ebcd"
    return "".join(sorted(letters, key=order.index))


def _transpose_sign(M, tol):
    if M.size == 0:
        return 1
    if np.allclose(M, M.T, atol=tol, rtol=0):
        return 1
    if np.allclose(M, -M.T, atol=tol, rtol=0):
        return -1
    return None


def _square_phase(M, tol):
    if M.size == 0:
        return 0.0
    S = M @ M
    lam = S[0, 0]
    if abs(abs(lam) - 1) > 1e-8 or not np.allclose(S, lam * np.eye(M.shape[0]), atol=1e-8, rtol=0):
        return None
    return float(np.angle(lam))


def structural_report(spec: InvolutionSpec, q: Quiver, d: DimensionData, tol=1e-10):
    """Which twist condition the pair (g, h) satisfies.

    Words with exactly one of b, e need g and h symmetric or antisymmetric;
    otherwise g^2, h^2 must be phases.  The required sign relation is read
    off from the untwisted square of the word.
    """
    g, h = spec.twist(d)
    key = _canonical(spec.letters)
    transpose_kind = spec.has("b") != spec.has("e")
    probe = random_representation(q, d, 12345)
    plain = spec.untwisted()
    sq = apply(plain, apply(plain, probe))
    frame_sign, arrow_sign = {}, {}
    for v in q.vertices:
        if probe.I[v].size:
            frame_sign[v] = int(np.sign(np.vdot(probe.I[v], sq.I[v]).real))
    for a in q.arrows:
        if probe.A[a.id].size:
            arrow_sign[a.id] = int(np.sign(np.vdot(probe.A[a.id], sq.A[a.id]).real))
    report = {"word": spec.letters, "twist_condition": TWIST_CONDITIONS.get(key),
              "kind": "transpose" if transpose_kind else "square_phase",
              "untwisted_square_frame_sign": frame_sign,
              "untwisted_square_arrow_sign": arrow_sign,
              "twist_unitary": g.unitary_flag and h.unitary_flag}
    ok = True
    if transpose_kind:
        lam = {v: _transpose_sign(g[v], tol) for v in q.vertices}
        kap = {v: _transpose_sign(h[v], tol) for v in q.vertices}
        report["g_transpose_sign"], report["h_transpose_sign"] = lam, kap
        if None in lam.values() or None in kap.values():
            ok = False
        else:
            for v, s in frame_sign.items():
                ok &= lam[v] * kap[v] * s == 1
            for a in q.arrows:
                if a.id in arrow_sign:
                    ok &= lam[a.head] * lam[a.tail] * arrow_sign[a.id] == 1
        report["relation"] = "lambda*kappa*frame_sign = 1 and lambda_head*lambda_tail*arrow_sign = 1"
    else:
        xi = {v: _square_phase(g[v], tol) for v in q.vertices}
        zeta = {v: _square_phase(h[v], tol) for v in q.vertices}
        report["g_square_phase"], report["h_square_phase"] = xi, zeta
        if None in xi.values() or None in zeta.values():
            ok = False
        else:
            for v, s in frame_sign.items():
                ok &= abs(np.exp(1j * (xi[v] + zeta[v])) * s - 1) < 1e-8
            flip = spec.has("b")
            for a in q.arrows:
                if a.id in arrow_sign:
                    rel = xi[a.head] + xi[a.tail] if flip else xi[a.head] - xi[a.tail]
                    ok &= abs(np.exp(1j * rel) * arrow_sign[a.id] - 1) < 1e-8
            report["phase_condition"] = ("xi_tail = -xi_head" if flip else "xi_tail = xi_head")
    report["satisfied"] = bool(ok)
    return report


def is_involution(spec: InvolutionSpec, q: Quiver, d: DimensionData, trials=3, seed=0, tol=INV_TOL):
    """(True/False, report): empirical involutivity on random data plus diagnostics."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    spec.check(q, d)
    worst = 0.0
    for t in range(trials):
        X = random_representation(q, d, seed + t)
        Y = apply(spec, apply(spec, X))
        worst = max(worst, Y.distance(X) / max(1.0, X.norm()))
    report = structural_report(spec, q, d)
    report["max_square_defect"] = worst
    return worst <= tol, report


def signature(spec: InvolutionSpec, q: Quiver, d: DimensionData, seed=0, tol=INV_TOL):
    X = random_representation(q, d, seed)
    base = apply(spec, X)
    out = []
    for k in (1, 2, 3):
        lhs = apply(spec, gamma(k, X))
        rhs = gamma(k, base)
        scale = max(1.0, X.norm())
        if lhs.distance(rhs) <= tol * scale:
            out.append(1)
        elif lhs.distance(-rhs) <= tol * scale:
            out.append(-1)
        else:
            raise SignatureError(f"spec neither commutes nor anticommutes with Gamma{k}")
    return tuple(out)


def brane_type(spec_or_signature) -> str:
    sig = spec_or_signature
    if isinstance(sig, InvolutionSpec):
        sig = sig.letter_signature()
    return "(" + ",".join("B" if s > 0 else "A" for s in sig) + ")"


# -- level behaviour -------------------------------------------------------

_LAWS = {
    "identity": lambda M: M,
    "negate": lambda M: -M,
    "transpose": lambda M: M.T,
    "negate_transpose": lambda M: -M.T,
    "conjugate": np.conj,
    "negate_conjugate": lambda M: -np.conj(M),
    "adjoint": lambda M: M.conj().T,
    "negate_adjoint": lambda M: -M.conj().T,
}


def _match_law(before, after, conj_by, tol):
    for name, law in _LAWS.items():
        ok = True
        for v, M in before.items():
            G = conj_by.get(v)
            pred = law(M)
            if G is not None and G.size:
                pred = G @ pred @ np.linalg.inv(G)
            if not np.allclose(after[v], pred, atol=tol * max(1.0, np.abs(M).max(initial=0)), rtol=0):
                ok = False
                break
        if ok:
            return name
    return None


def descent_report(spec: InvolutionSpec, X: Representation, tol=1e-10):
    mb = moment_maps(X)
    ma = moment_maps(apply(spec, X))
    conj_by = {} if spec.g is None else dict(spec.g.blocks)
    law_c = _match_law(mb.muC, ma.muC, conj_by, tol)
    law_3 = _match_law(mb.mu3, ma.mu3, conj_by, tol)
    levels = None
    if law_3 is not None:
        image = _LAWS[law_3](np.array([[1j]]))[0, 0]
        levels = "preserved" if abs(image - 1j) < 1e-12 else "flipped"
    if law_c is not None and levels == "preserved":
        quotients = ["N0", "N1", "N-1", "Nreg"]
    elif law_c is not None and levels == "flipped":
        quotients = ["N0", "Nreg"]
    else:
        quotients = []
    return {"word": spec.letters, "muC_law": law_c, "mu3_law": law_3,
            "mu3_levels": levels, "descends_to": quotients}


def level_preserving(spec: InvolutionSpec) -> bool:
    """Words with an odd number of b send the level i*c to -i*c."""
    return not spec.has("b")
