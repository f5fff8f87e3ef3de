"""Explicit example data with their involutions, plus builders for
symplectic and orthogonal autodual ADHM data."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .involutions import (DeltaAssignment, GammaAssignment, InvolutionSpec, b, c, d, e)
from .monad import adhm_residual
from .quiver import FrameElement, GaugeElement, Representation, kron_inflate
from .stability import is_regular

NAMES = ("c-example", "bd-example", "symplectic", "orthogonal")


class CatalogError(ValueError):
    pass


@dataclass
class CatalogEntry:
    name: str
    X: Representation
    spec: InvolutionSpec
    expected: dict
    extra_specs: dict = field(default_factory=dict)

    @property
    def q(self):
        return self.X.quiver

    @property
    def d(self):
        return self.X.dims

    def to_json(self):
        from .serialization import encode_representation
        out = encode_representation(self.X)
        out["name"] = self.name
        out["spec"] = self.spec.to_json()
        out["expected"] = self.expected
        out["extra_specs"] = {k: s.to_json() for k, s in self.extra_specs.items()}
        return out


def _rot(k):
    return kron_inflate([[0, -1], [1, 0]], k)


def build_c_example(k: int = 1) -> CatalogEntry:
    if k < 1:
        raise CatalogError("k must be at least 1")
    A = kron_inflate([[1, 2], [2, -1]], k)
    B = kron_inflate([[1, 1], [1, -1]], k)
    I = kron_inflate(np.eye(2), k)
    J = kron_inflate([[0, 2], [-2, 0]], k)
    X = Representation.jordan(A, B, I, J)
    g = _rot(k)
    spec = InvolutionSpec([c(GammaAssignment.constant(X.quiver, -1))],
                          GaugeElement({"0": g}), FrameElement({"0": g}))
    real_spec = InvolutionSpec([e] + list(spec.word), spec.g, spec.h)
    r = n = 2 * k
    expected = {"adhm_zero": True, "regular": True, "brane_type": "(B,B,B)", "fixed": True,
                "dims": {"quotient_real": 4 * r * n, "ec_fixed_real": 2 * r * n}}
    return CatalogEntry("c-example", X, spec, expected, {"ec": real_spec})


BD_GAUGE = np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float)
BD_FRAME = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)


def bd_matrices(a=1.0, b1=1.0, b2=1.0, b3=1.0, b4=1.0):
    A = np.array([[a, 0, 0, 1], [0, a, -1, 0], [0, 1, a, 0], [-1, 0, 0, a]], dtype=complex)
    B = np.array([[b1, b2, b3, 1], [0, -b1, 1, b4], [b4, 1, -b1, 0], [1, b3, -b2, b1]], dtype=complex)
    I = np.array([[0, 0, 2, 0], [0, 0, 0, -2], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex)
    # J = -I; with J = I the ADHM residual is diag(4, -4, 4, -4)
    return A, B, I, -I


def build_bd_example(k: int = 1, a=1.0, b1=1.0, b2=1.0, b3=1.0, b4=1.0) -> CatalogEntry:
    if k < 1:
        raise CatalogError("k must be at least 1")
    A, B, I, J = (kron_inflate(M, k) for M in bd_matrices(a, b1, b2, b3, b4))
    X = Representation.jordan(A, B, I, J)
    # transpose after (A, B, I, J) -> (A, -B, -I, J) reproduces the displayed map with J = -I
    delta = DeltaAssignment({"a": (1.0, 0.0)}, {}, {"0": -1.0})
    g = GaugeElement({"0": kron_inflate(BD_GAUGE, k)})
    h = FrameElement({"0": kron_inflate(BD_FRAME, k)})
    spec = InvolutionSpec([b, d(delta)], g, h)
    extra = {}
    params_real = all(np.isreal(p) for p in (a, b1, b2, b3, b4))
    if params_real:
        extra["ebd"] = InvolutionSpec([e, b, d(delta)], g, h)
    n = 4 * k
    expected = {"adhm_zero": True, "regular": True, "brane_type": "(B,A,A)", "fixed": True,
                "dims": {"quotient_real": 4 * n * n, "fixed_real": 32 * k * k},
                "real_variant": {"brane_type": "(A,A,B)", "fixed": params_real}}
    return CatalogEntry("bd-example", X, spec, expected, extra)


def standard_form(m):
    """Standard antisymmetric form [[0, 1], [-1, 0]] kron identity."""
    return np.kron(np.array([[0, 1], [-1, 0]]), np.eye(m // 2))


def _sym_commutator_solve(A, rhs, rng):
    """Symmetric B with A B - B A = rhs (rhs antisymmetric), plus a random kernel element."""
    n = A.shape[0]
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    cols = []
    for i, j in idx:
        E = np.zeros((n, n), dtype=complex)
        E[i, j] = E[j, i] = 1
        cols.append((A @ E - E @ A).ravel())
    M = np.array(cols).T
    sol, *_ = np.linalg.lstsq(M, rhs.ravel(), rcond=None)
    B = np.zeros((n, n), dtype=complex)
    for (i, j), v in zip(idx, sol):
        B[i, j] = B[j, i] = v
    # polynomials in A commute with A and are symmetric
    P = np.zeros((n, n), dtype=complex)
    power = np.eye(n, dtype=complex)
    for _ in range(n):
        P = P + (rng.standard_normal() + 1j * rng.standard_normal()) * power
        power = power @ A
    return B + P, np.linalg.norm(M @ sol - rhs.ravel())


def symplectic_spec(n, r):
    return InvolutionSpec([b], GaugeElement({"0": np.eye(n)}), FrameElement({"0": standard_form(r)}))


def build_symplectic(n: int = 1, r: int = 2, seed: int = 0, retries: int = 50) -> CatalogEntry | None:
    if r % 2 or r < 2:
        raise CatalogError("symplectic data need an even framing rank")
    if n < 1:
        raise CatalogError("n must be at least 1")
    h = standard_form(r)
    h_inv = np.linalg.inv(h)
    spec = symplectic_spec(n, r)
    expected = {"adhm_zero": True, "regular": True, "brane_type": "(B,B,B)", "fixed": True,
                "dims": {"fixed_complex": n * (r + 2), "quotient_real": 4 * r * n}}
    if n == 1:
        I = np.zeros((1, r), dtype=complex)
        I[0, 0] = 1
        X = Representation.jordan([[1.0]], [[0.5]], I, -h_inv @ I.T)
        return CatalogEntry("symplectic", X, spec, expected)
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        S = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A = 0.5 * (S + S.T)
        I = (rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))) / np.sqrt(2)
        J = -h_inv @ I.T
        B, res = _sym_commutator_solve(A, -I @ J, rng)
        if res > 1e-9:
            continue
        X = Representation.jordan(A, B, I, J)
        if is_regular(X) and np.linalg.norm(adhm_residual(X)) < 1e-9:
            return CatalogEntry("symplectic", X, spec, expected)
    return None


def orthogonal_spec(n, r):
    return InvolutionSpec([b], GaugeElement({"0": standard_form(n)}), FrameElement({"0": np.eye(r)}))


def _antisym_basis(n):
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n))
            E[i, j], E[j, i] = 1, -1
            out.append(E)
    return out


def build_orthogonal(n: int = 4, r: int = 4, seed: int = 0, budget: int = 200) -> CatalogEntry | None:
    """Random Gauss-Newton search for regular ADHM data with Omega A, Omega B antisymmetric
    and J = -I^t Omega^{-1}."""
    if n % 2 or n <= 2:
        raise CatalogError("orthogonal data need n even and larger than 2")
    Om = standard_form(n)
    Om_inv = np.linalg.inv(Om)
    basis = _antisym_basis(n)
    m = len(basis)
    spec = orthogonal_spec(n, r)
    expected = {"adhm_zero": True, "regular": True, "brane_type": "(B,B,B)", "fixed": True,
                "dims": {"parameter_count_complex": n * (r - 2), "stated_complex": n * (r - 1)}}
    rng = np.random.default_rng(seed)

    def unpack(z):
        A = Om_inv @ sum(z[i] * basis[i] for i in range(m))
        B = Om_inv @ sum(z[m + i] * basis[i] for i in range(m))
        I = z[2 * m:].reshape(n, r)
        return A, B, I, -I.T @ Om_inv

    def residual(z):
        A, B, I, J = unpack(z)
        return (A @ B - B @ A + I @ J).ravel()

    size = 2 * m + n * r
    for _ in range(budget):
        z = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)
        for _ in range(50):
            F = residual(z)
            if np.linalg.norm(F) < 1e-13:
                break
            # the residual is quadratic, so central differences are exact up to rounding
            Jac = np.empty((F.size, size), dtype=complex)
            for j in range(size):
                dz = np.zeros(size, dtype=complex)
                dz[j] = 1.0
                Jac[:, j] = (residual(z + dz) - residual(z - dz)) / 2
            step, *_ = np.linalg.lstsq(Jac, -F, rcond=None)
            z = z + step
        A, B, I, J = unpack(z)
        X = Representation.jordan(A, B, I, J)
        if np.linalg.norm(adhm_residual(X)) < 1e-10 and is_regular(X):
            return CatalogEntry("orthogonal", X, spec, expected)
    return None


def build(name: str, k: int = 1, seed: int = 0) -> CatalogEntry | None:
    if name == "c-example":
        return build_c_example(k)
    if name == "bd-example":
        return build_bd_example(k)
    if name == "symplectic":
        return build_symplectic(k, 2, seed)
    if name == "orthogonal":
        return build_orthogonal(4, 4, seed)
    raise CatalogError(f"unknown catalog entry {name!r}")
