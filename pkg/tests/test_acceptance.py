"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""
import itertools
import sys
import time

import numpy as np
import pytest

from quiverbranes.catalog import (build_bd_example, build_c_example, build_orthogonal,
                                  build_symplectic)
from quiverbranes.flow import flow_to_level, flowed, gradient, objective
from quiverbranes.hyperkahler import LevelSpec, gamma, metric, moment_maps, omega
from quiverbranes.involutions import (DeltaAssignment, GammaAssignment, InvolutionSpec, apply,
                                      b, brane_type, c, d, e, signature)
from quiverbranes.monad import (P2Involution, P2Point, adhm_residual, beta_surjective_everywhere,
                                fiber_dim, monad_at, pullback_spec, sample_points,
                                verify_monad_square)
from quiverbranes.orbits import is_identity, is_moduli_fixed
from quiverbranes.quiver import (DimensionData, FrameElement, GaugeElement, act, jordan_quiver,
                                 random_representation)
from quiverbranes.stability import is_costable, is_regular, is_stable
from quiverbranes.tangent import default_level, fixed_subspace, quotient_tangent, structure_checks

from corpus import mutilated_corpus, random_adhm, regular_corpus, three_vertex, x0

TOL = 1e-10


def _fixed_at_level(entry, spec):
    level = default_level(spec)
    Y = flowed(entry.X, flow_to_level(entry.X, level, symmetrize_for=spec))
    frame = quotient_tangent(Y, level)
    return Y, frame, fixed_subspace(spec, Y, frame)


def criterion_1():
    start = time.perf_counter()
    worst = 0.0
    rng = np.random.default_rng(2024)
    cases = []
    for i in range(100):
        d_ = DimensionData.jordan(int(rng.integers(1, 5)), int(rng.integers(0, 5)))
        cases.append((jordan_quiver(), d_, i))
    q3, d3 = three_vertex()
    cases.append((q3, d3, 100))
    for q, dims, seed in cases:
        X = random_representation(q, dims, seed)
        Y = random_representation(q, dims, seed + 1000)
        for k in (1, 2, 3):
            worst = max(worst, gamma(k, gamma(k, X)).distance(-X))
            worst = max(worst, abs(metric(gamma(k, X), gamma(k, Y)) - metric(X, Y)))
            worst = max(worst, abs(omega(k, X, Y) + omega(k, Y, X)))
        worst = max(worst, gamma(1, gamma(2, X)).distance(gamma(3, X)))
        mv = moment_maps(X)
        g = GaugeElement.random_unitary(dims, seed)
        h = FrameElement.random_unitary(dims, seed + 7)
        mz = moment_maps(act(g, h, X))
        for key in ("mu1", "mu2", "mu3", "muC"):
            for v, M in getattr(mv, key).items():
                worst = max(worst, np.abs(getattr(mz, key)[v] - g[v] @ M @ g[v].conj().T).max(initial=0))
        for v in mv.muC:
            worst = max(worst, np.abs(mv.muC[v] + mv.mu1[v] + 1j * mv.mu2[v]).max(initial=0))
    elapsed = time.perf_counter() - start
    return worst <= TOL and elapsed < 5.0, f"max defect {worst:.2e}, {elapsed:.2f}s"


def criterion_2():
    notes = []
    ok = True
    for k in (1, 2, 3):
        entry = build_c_example(k)
        ok &= bool(np.all(adhm_residual(entry.X) == 0))
        ok &= is_regular(entry.X)
        ok &= is_identity(is_moduli_fixed(entry.spec, entry.X))
        ok &= brane_type(entry.spec) == "(B,B,B)"
        real = entry.extra_specs["ec"]
        ok &= is_identity(is_moduli_fixed(real, entry.X))
        ok &= brane_type(real) == "(A,B,A)"
        _, _, fixed = _fixed_at_level(entry, real)
        ok &= fixed.real_dim == 8 * k * k and fixed.type_tag == "(A,B,A)"
        notes.append(f"k={k}: real dim {fixed.real_dim}")
    return ok, "; ".join(notes)


def criterion_3():
    notes = []
    ok = True
    for k in (1, 2):
        entry = build_bd_example(k)
        ok &= bool(np.all(adhm_residual(entry.X) == 0))
        ok &= is_regular(entry.X)
        ok &= is_identity(is_moduli_fixed(entry.spec, entry.X))
        ok &= brane_type(entry.spec) == "(B,A,A)"
        _, _, fixed = _fixed_at_level(entry, entry.spec)
        ok &= fixed.real_dim == 32 * k * k
        real = entry.extra_specs["ebd"]
        ok &= is_identity(is_moduli_fixed(real, entry.X))
        ok &= brane_type(real) == "(A,A,B)"
        notes.append(f"k={k}: real dim {fixed.real_dim}")
    return ok, "; ".join(notes)


def criterion_4():
    entry = build_symplectic(1, 2)
    A, B, I, J = entry.X.jordan_blocks
    g, h = entry.spec.g["0"], entry.spec.h["0"]
    defect = max(np.abs(g @ A - A.T @ g).max(), np.abs(g @ B - B.T @ g).max(),
                 np.abs(J + np.linalg.inv(h) @ I.T @ g).max())
    _, _, fixed = _fixed_at_level(entry, entry.spec)
    complex_dim = fixed.real_dim / 2
    ok = defect <= 1e-12 and complex_dim == 4
    return ok, f"identity defect {defect:.1e}, fixed complex dim {complex_dim:g}"


WORD_TYPES = {"b": "(B,B,B)", "c": "(B,B,B)", "d": "(B,A,A)", "e": "(A,B,A)", "eb": "(A,B,A)",
         "ec": "(A,B,A)", "ebc": "(A,B,A)", "ed": "(A,A,B)", "ebd": "(A,A,B)"}
LETTER_SIGNS = {"b": (1, 1, 1), "c": (1, 1, 1), "d": (1, -1, -1), "e": (-1, 1, -1)}


def criterion_5():
    q, dims = jordan_quiver(), DimensionData.jordan(2, 2)
    letters = {"b": b, "c": c(GammaAssignment.constant(q, -1)),
               "d": d(DeltaAssignment({"a": (0.6, 0.8)}, {}, {"0": 1.0})), "e": e}
    bad = []
    for name, sig in LETTER_SIGNS.items():
        if signature(InvolutionSpec([letters[name]]), q, dims) != sig:
            bad.append(name)
    for word, kind in WORD_TYPES.items():
        spec = InvolutionSpec([letters[x] for x in word])
        if brane_type(signature(spec, q, dims)) != kind or brane_type(spec) != kind:
            bad.append(word)
    for x, y in itertools.product("bcde", repeat=2):
        if x == y:
            continue
        sxy = signature(InvolutionSpec([letters[x], letters[y]]), q, dims)
        if sxy != tuple(a * b_ for a, b_ in zip(LETTER_SIGNS[x], LETTER_SIGNS[y])):
            bad.append(x + y)
    return not bad, f"{len(WORD_TYPES)} words, 4 letters, 12 products; mismatches: {bad or 'none'}"


def criterion_6():
    corpus = regular_corpus(25, seed=0) + mutilated_corpus(25, seed=1)
    transpose = InvolutionSpec([b])
    disagreements = duality = 0
    for i, X in enumerate(corpus):
        stable = is_stable(X)
        disagreements += stable != beta_surjective_everywhere(X, samples=1000, seed=i)
        duality += stable != is_costable(apply(transpose, X))
    ok = disagreements == 0 and duality == 0
    return ok, f"{len(corpus)} data, sampling disagreements {disagreements}, duality failures {duality}"


def _regular_entries():
    return [build_c_example(1), build_c_example(2), build_bd_example(1), build_symplectic(1, 2),
            build_symplectic(2, 2), build_orthogonal(4, 4)]


def criterion_7():
    worst = 0.0
    rng = np.random.default_rng(7)
    for i in range(100):
        X = random_representation(jordan_quiver(), DimensionData.jordan(int(rng.integers(1, 5)),
                                                                        int(rng.integers(0, 5))), i)
        p = sample_points(1, i, include_special=False)[0]
        ev = monad_at(X, p)
        worst = max(worst, np.abs(ev.beta @ ev.alpha - p.x0 ** 2 * moment_maps(X).muC["0"]).max())
    ok = worst <= 1e-12
    fibers_ok = True
    for entry in _regular_entries():
        r = entry.d.W["0"]
        fibers_ok &= all(fiber_dim(entry.X, p) == r for p in sample_points(20, 1, include_special=False))
    origin = P2Point.of((1, 0, 0))
    ideal_ok = fiber_dim(x0(), origin) == 2
    elsewhere = [p for p in sample_points(20, 2) if not p.same_as(origin)]
    ideal_ok &= all(fiber_dim(x0(), p) == 1 for p in elsewhere)
    square = 0.0
    data = [build_c_example(1).X, random_adhm(2, 2, 0), random_adhm(3, 4, 1)]
    for inv in (P2Involution("sigma1"), P2Involution("sigma2", 0.6, 0.8j), P2Involution("tau0")):
        for X in data:
            square = max(square, verify_monad_square(pullback_spec(inv), inv, X, sample_count=50))
    ok = ok and fibers_ok and ideal_ok and square <= 1e-10
    return ok, (f"max |beta alpha - x0^2 muC| {worst:.1e}, fibers {fibers_ok}, ideal datum {ideal_ok}, "
                f"square defect {square:.1e}")


def _fd_check(X, level, seed):
    rng = np.random.default_rng(seed)
    n = X.dims.V["0"]
    s = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = 0.05 * (s + s.conj().T)
    ds = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    ds = 0.5 * (ds + ds.conj().T)
    eps = 1e-6
    fd = (objective(X, {"0": s + eps * ds}, level) - objective(X, {"0": s - eps * ds}, level)) / (2 * eps)
    an = np.vdot(gradient(X, {"0": s}, level)["0"], ds).real
    return abs(fd - an) / max(abs(an), 1e-12)


def criterion_8():
    start = time.perf_counter()
    level = LevelSpec(0.5)
    worst_res = worst_cres = worst_fd = 0.0
    converged = True
    for i, entry in enumerate(_regular_entries()):
        res = flow_to_level(entry.X, level, tol=1e-9, max_iters=10_000, track_complex=True)
        converged &= res.converged
        worst_res = max(worst_res, res.residual)
        worst_cres = max(worst_cres, res.max_complex_residual)
        worst_fd = max(worst_fd, _fd_check(entry.X, level, i))
    elapsed = time.perf_counter() - start
    ok = converged and worst_res <= 1e-8 and worst_cres <= 1e-10 and worst_fd <= 1e-6 and elapsed < 30
    return ok, (f"residual {worst_res:.1e}, complex drift {worst_cres:.1e}, gradient rel error "
                f"{worst_fd:.1e}, {elapsed:.1f}s")


def criterion_9():
    cases = []
    for entry in (build_c_example(1), build_bd_example(1), build_symplectic(1, 2), build_orthogonal(4, 4)):
        for spec in [entry.spec, *entry.extra_specs.values()]:
            cases.append((entry, spec))
    failures = []
    worst_a = worst_b = 0.0
    for entry, spec in cases:
        Y, _, fixed = _fixed_at_level(entry, spec)
        checks = structure_checks(spec, Y, fixed)
        kind = fixed.type_tag.strip("()").split(",")
        for k, letter in zip((1, 2, 3), kind):
            om, inv = checks[k]["omega_defect"], checks[k]["invariance_defect"]
            if letter == "A":
                worst_a = max(worst_a, om)
                if om > 1e-8:
                    failures.append(f"{entry.name}/{spec.letters}/omega{k}")
            else:
                worst_b = max(worst_b, inv)
                # a complex subspace cannot be isotropic, so omega_k must not vanish there
                if inv > 1e-8 or om <= 1e-8:
                    failures.append(f"{entry.name}/{spec.letters}/Gamma{k}")
    return not failures, (f"{len(cases)} fixed points, lagrangian defect {worst_a:.1e}, "
                          f"complex defect {worst_b:.1e}, failures: {failures or 'none'}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


def _report(number, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # an exception is a failed criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    return ok, line


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, capsys):
    ok, line = _report(number, CRITERIA[number - 1])
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = []
    for number, fn in enumerate(CRITERIA, 1):
        ok, line = _report(number, fn)
        print(line, flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
