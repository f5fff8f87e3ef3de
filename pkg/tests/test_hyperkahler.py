import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quiverbranes.catalog import build_c_example
from quiverbranes.hyperkahler import (LevelSpec, gamma, metric, moment_maps, omega,
                                      stable_side_sign)
from quiverbranes.quiver import (DimensionData, GaugeElement, FrameElement, Representation, act,
                                 jordan_quiver, random_representation)

from corpus import three_vertex, x0


def test_metric_of_ideal_datum():
    assert metric(x0(), x0()) == pytest.approx(1.0)


def test_metric_of_orthogonal_phases():
    Y = Representation.jordan([[0]], [[0]], [[1j]], [[0]])
    assert metric(x0(), Y) == pytest.approx(0.0)


def test_metric_with_zero():
    X = random_representation(jordan_quiver(), DimensionData.jordan(2, 3), 0)
    assert metric(X, X * 0) == 0.0


def test_gamma2_on_ideal_datum():
    A, B, I, J = gamma(2, x0()).jordan_blocks
    assert (A[0, 0], B[0, 0], I[0, 0], J[0, 0]) == (0, 0, 0, 1)


def test_omega1_value():
    Y = Representation.jordan([[0]], [[0]], [[1j]], [[0]])
    assert omega(1, x0(), Y) == pytest.approx(-1.0)


def test_moment_values_of_ideal_datum():
    mv = moment_maps(x0())
    assert mv.muC["0"][0, 0] == 0
    assert mv.mu3["0"][0, 0] == pytest.approx(0.5j)
    assert stable_side_sign() == 1.0


def test_c_example_solves_complex_equation():
    assert np.all(moment_maps(build_c_example(1).X).muC["0"] == 0)


def test_zero_has_zero_moments():
    X = Representation.zeros(jordan_quiver(), DimensionData.jordan(3, 2))
    mv = moment_maps(X)
    assert all(np.all(getattr(mv, k)["0"] == 0) for k in ("mu1", "mu2", "mu3", "muC"))


def test_level_target():
    assert np.allclose(LevelSpec(0.25).target(2), 0.25j * np.eye(2))


def _random_pair(seed, three=False):
    if three:
        q, d = three_vertex()
    else:
        rng = np.random.default_rng(seed)
        q, d = jordan_quiver(), DimensionData.jordan(int(rng.integers(1, 5)), int(rng.integers(0, 5)))
    return random_representation(q, d, seed), random_representation(q, d, seed + 1)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000), three=st.booleans())
def test_quaternionic_relations(seed, three):
    X, _ = _random_pair(seed, three)
    for k in (1, 2, 3):
        assert gamma(k, gamma(k, X)).distance(-X) < 1e-12
    assert gamma(1, gamma(2, X)).distance(gamma(3, X)) < 1e-12
    assert gamma(2, gamma(3, X)).distance(gamma(1, X)) < 1e-12
    assert gamma(3, gamma(1, X)).distance(gamma(2, X)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000), three=st.booleans())
def test_compatibility_and_antisymmetry(seed, three):
    X, Y = _random_pair(seed, three)
    for k in (1, 2, 3):
        assert abs(metric(gamma(k, X), gamma(k, Y)) - metric(X, Y)) < 1e-10
        assert abs(omega(k, X, X)) < 1e-10
        assert abs(omega(k, X, Y) + omega(k, Y, X)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000), three=st.booleans())
def test_moment_identities_and_equivariance(seed, three):
    X, Y = _random_pair(seed, three)
    mv = moment_maps(X)
    for v in mv.muC:
        assert np.abs(mv.muC[v] + mv.mu1[v] + 1j * mv.mu2[v]).max(initial=0) < 1e-10
        H = -1j * mv.mu3[v]
        assert np.abs(H - H.conj().T).max(initial=0) < 1e-10
    g = GaugeElement.random_unitary(X.dims, seed)
    h = FrameElement.random_unitary(X.dims, seed + 5)
    Z = act(g, h, X)
    mz = moment_maps(Z)
    for k in ("mu1", "mu2", "mu3", "muC"):
        for v, M in getattr(mv, k).items():
            assert np.abs(getattr(mz, k)[v] - g[v] @ M @ g[v].conj().T).max(initial=0) < 1e-10
    for k in (1, 2, 3):
        assert abs(omega(k, act(g, h, X), act(g, h, Y)) - omega(k, X, Y)) < 1e-10
