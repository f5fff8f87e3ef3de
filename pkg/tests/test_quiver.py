import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quiverbranes.quiver import (Arrow, DimensionData, FrameElement, GaugeElement,
                                 InvalidGroupElement, Quiver, QuiverError, Representation, act,
                                 jordan_quiver, random_representation, validate_representation)

from corpus import three_vertex, x0


def test_quiver_rejects_undeclared_endpoint():
    with pytest.raises(QuiverError):
        Quiver(("0",), (Arrow("a", "0", "1"),))


def test_quiver_rejects_duplicate_arrow_ids():
    with pytest.raises(QuiverError):
        Quiver(("0",), (Arrow("a", "0", "0"), Arrow("a", "0", "0")))


def test_loop_partition_covers_arrows():
    q, _ = three_vertex()
    assert len(q.loops) + len(q.non_loops) == len(q.arrows)
    assert [a.id for a in q.loops] == ["l"]


def test_validate_ideal_datum_is_clean():
    X = x0()
    assert validate_representation(X.quiver, X.dims, X) == []


def test_validate_flags_non_square_loop_block():
    q, d = jordan_quiver(), DimensionData.jordan(2, 1)
    X = Representation(q, d, {"a": np.zeros((2, 1))}, {"a": np.zeros((2, 2))},
                       {"0": np.zeros((2, 1))}, {"0": np.zeros((1, 2))})
    bad = validate_representation(q, d, X)
    assert len(bad) == 1 and "A[a]" in bad[0] and "(2, 2)" in bad[0]


def test_validate_flags_nan():
    q, d = jordan_quiver(), DimensionData.jordan(1, 1)
    X = Representation(q, d, {"a": [[np.nan]]}, {"a": [[0]]}, {"0": [[1]]}, {"0": [[0]]})
    bad = validate_representation(q, d, X)
    assert len(bad) == 1 and "non-finite" in bad[0]


def test_identity_action():
    X = random_representation(jordan_quiver(), DimensionData.jordan(3, 2), 1)
    Y = act(GaugeElement.identity(X.dims), FrameElement.identity(X.dims), X)
    assert Y.allclose(X, atol=0)


def test_scalar_action():
    Y = act(GaugeElement({"0": [[2]]}), FrameElement({"0": [[1]]}), x0())
    A, B, I, J = Y.jordan_blocks
    assert (A[0, 0], B[0, 0], I[0, 0], J[0, 0]) == (0, 0, 2, 0)


def test_action_inverse_roundtrip():
    q, d = three_vertex()
    X = random_representation(q, d, 3)
    g = GaugeElement({v: np.eye(n) + 0.3 * np.ones((n, n)) for v, n in d.V.items()})
    h = FrameElement({v: np.eye(n) * 1.5 for v, n in d.W.items()})
    Y = act(g, h, act(g.inverse(), h.inverse(), X))
    assert Y.distance(X) < 1e-12


def test_singular_block_rejected():
    with pytest.raises(InvalidGroupElement):
        GaugeElement({"0": [[1, 1], [1, 1]]})


def test_random_representation_deterministic_and_shaped():
    q, d = jordan_quiver(), DimensionData.jordan(2, 2)
    X, Y = random_representation(q, d, 7), random_representation(q, d, 7)
    assert X.allclose(Y, atol=0)
    assert [M.shape for _, M in X.blocks()] == [(2, 2)] * 4
    Z = random_representation(q, d, 8)
    assert np.all(X.flatten() != Z.flatten())


def test_representation_blocks_are_read_only():
    X = x0()
    with pytest.raises(ValueError):
        X.I["0"][0, 0] = 5


def test_flatten_roundtrip_and_dimension():
    q, d = three_vertex()
    X = random_representation(q, d, 2)
    v = X.flatten()
    assert v.size == X.real_dim
    assert Representation.from_flat(q, d, v).allclose(X, atol=0)


def test_zero_dimensional_vertex_is_legal():
    q = Quiver(("u", "w"), (Arrow("a", "u", "w"),))
    d = DimensionData({"u": 0, "w": 2}, {"u": 1, "w": 1})
    X = random_representation(q, d, 0)
    assert validate_representation(q, d, X) == []
    assert X.A["a"].shape == (2, 0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 4), r=st.integers(0, 3))
def test_left_action_composition(seed, n, r):
    d = DimensionData.jordan(n, r)
    X = random_representation(jordan_quiver(), d, seed)
    g1, g2 = GaugeElement.random_unitary(d, seed + 1), GaugeElement.random_unitary(d, seed + 2)
    h1, h2 = FrameElement.random_unitary(d, seed + 3), FrameElement.random_unitary(d, seed + 4)
    lhs = act(g2, h2, act(g1, h1, X))
    rhs = act(g2 @ g1, h1 @ h2, X)
    assert lhs.distance(rhs) < 1e-10
    assert g1.unitary_flag and h2.unitary_flag
