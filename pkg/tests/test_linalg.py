import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from prodcoh import linalg
from prodcoh.errors import DimensionMismatch
from prodcoh.field import parse_field

GF2, GF3, GF4 = parse_field("2"), parse_field("3"), parse_field("2^2:1,1,1")


def test_rref_identity_and_zero():
    R, piv = linalg.rref(GF2, np.eye(3, dtype=np.int64))
    assert np.array_equal(R, np.eye(3)) and list(piv) == [0, 1, 2]
    R, piv = linalg.rref(GF2, np.zeros((2, 3), dtype=np.int64))
    assert not R.any() and list(piv) == []


def test_rref_rank_one():
    R, piv = linalg.rref(GF2, np.array([[1, 1], [1, 1]]))
    assert R.tolist() == [[1, 1], [0, 0]] and list(piv) == [0]


def test_kernel_examples():
    assert linalg.kernel_basis(GF2, np.eye(3, dtype=np.int64)).shape[0] == 0
    assert linalg.kernel_basis(GF2, np.zeros((2, 2), dtype=np.int64)).tolist() == [[1, 0], [0, 1]]
    assert linalg.kernel_basis(GF2, np.array([[1, 1]])).tolist() == [[1, 1]]


def test_solve_examples():
    b = np.array([1, 0, 1])
    assert linalg.solve(GF2, np.eye(3, dtype=np.int64), b).tolist() == [1, 0, 1]
    assert linalg.solve(GF2, np.zeros((2, 2), dtype=np.int64), np.array([1, 0])) is None
    a = GF4.alpha
    x = linalg.solve(GF4, np.array([[a]]), np.array([1]))
    assert x.tolist() == [GF4.mul(a, a)]


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        linalg.solve(GF2, np.eye(2, dtype=np.int64), np.array([1, 0, 1]))


def test_coords_mod_subspace():
    v = np.array([1, 1, 0])
    assert linalg.coords_mod_subspace(GF2, v, np.array([[1, 0, 0]])).tolist() == [0, 1, 0]
    assert linalg.coords_mod_subspace(GF2, v, np.zeros((0, 3), dtype=np.int64)).tolist() == [1, 1, 0]
    assert not linalg.coords_mod_subspace(GF2, v, np.array([[1, 1, 0]])).any()


def matrices(q, max_side=12):
    return st.tuples(st.integers(1, max_side), st.integers(1, max_side)).flatmap(
        lambda s: hnp.arrays(np.int64, s, elements=st.integers(0, q - 1)))


@pytest.mark.parametrize("F", [GF2, GF3, GF4], ids=["GF2", "GF3", "GF4"])
@given(data=st.data())
def test_rank_nullity_and_idempotence(F, data):
    M = data.draw(matrices(F.q))
    R, piv = linalg.rref(F, M)
    K = linalg.kernel_basis(F, M)
    assert len(piv) + K.shape[0] == M.shape[1]
    if K.shape[0]:
        assert not F.matmul(M, K.T).any()
    R2, piv2 = linalg.rref(F, R)
    assert np.array_equal(R, R2) and list(piv) == list(piv2)
    assert list(piv) == sorted(set(piv))


@pytest.mark.parametrize("F", [GF2, GF4], ids=["GF2", "GF4"])
@given(data=st.data())
def test_solve_image_vectors(F, data):
    A = data.draw(matrices(F.q))
    x = data.draw(hnp.arrays(np.int64, A.shape[1], elements=st.integers(0, F.q - 1)))
    b = F.matmul(A, x[:, None])[:, 0]
    y = linalg.solve(F, A, b)
    assert y is not None and np.array_equal(F.matmul(A, y[:, None])[:, 0], b)


def test_large_gf2_rank_nullity():
    rng = np.random.default_rng(1)
    M = rng.integers(0, 2, (64, 64))
    M[:, 10] = M[:, 3] ^ M[:, 7]
    r = linalg.rank(GF2, M)
    assert r + linalg.kernel_basis(GF2, M).shape[0] == 64 and r < 64


def test_quotient_space_coordinates():
    top = np.eye(3, dtype=np.int64)
    sub = np.array([[1, 1, 0]])
    qs = linalg.QuotientSpace(GF2, top, sub, 3)
    assert qs.dim == 2
    assert np.array_equal(qs.coords(np.array([1, 1, 0])), [0, 0])
    v = np.array([0, 1, 1])
    assert np.array_equal(qs.coords(qs.lift(qs.coords(v))), qs.coords(v))
