from math import factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sylvlike.errors import DimensionMismatch, IndexOutOfRange
from sylvlike.matrix_core import vec
from sylvlike.structured_ops import (KINDS, StructuredOperator, apply, classify,
                                     commutation_matrix, index_to_permutation,
                                     kf_matrix, operator_from_json,
                                     operator_to_json, scalar_map)

from helpers import cgauss, rel

M = 4
P7 = (2, 1, 3, 4)


def make(kind, m=M, perm=None):
    if kind.startswith("perm"):
        return StructuredOperator(kind, perm or tuple(range(m, 0, -1)))
    return StructuredOperator(kind)


def test_apply_examples():
    x = np.array([[1, 2], [3, 4]])
    np.testing.assert_array_equal(apply(make("transpose"), x), [[1, 3], [2, 4]])
    assert apply(make("conjugate"), [[1j]])[0, 0] == -1j
    e11 = np.zeros((4, 4))
    e11[0, 0] = 1
    out = apply(StructuredOperator("perm_similarity", P7), e11)
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    np.testing.assert_array_equal(out, expected)


def test_apply_matches_explicit_matrices(rng):
    perm = (3, 1, 4, 2)
    P = StructuredOperator("perm_similarity", perm).P
    x = cgauss(rng, 4, 4)
    np.testing.assert_allclose(apply(StructuredOperator("perm_similarity", perm), x),
                               P @ x @ P.T)
    np.testing.assert_allclose(apply(StructuredOperator("perm_reversing", perm), x),
                               P @ x.T @ P.T)
    np.testing.assert_allclose(apply(make("conjugate_transpose"), x), x.conj().T)


def test_apply_size_checks():
    with pytest.raises(DimensionMismatch):
        apply(StructuredOperator("perm_similarity", P7), np.eye(3))
    with pytest.raises(DimensionMismatch):
        apply(make("transpose"), np.ones((2, 3)))


def test_invalid_operators():
    with pytest.raises(ValueError):
        StructuredOperator("hermitian")
    with pytest.raises(ValueError):
        StructuredOperator("perm_similarity")
    with pytest.raises(ValueError):
        StructuredOperator("perm_similarity", (1, 1, 2))


@pytest.mark.parametrize("kind, a, expected", [
    ("transpose", 2 + 3j, 2 + 3j),
    ("conjugate_transpose", 2 + 3j, 2 - 3j),
    ("identity", 0, 0),
    ("conjugate", 1j, -1j),
])
def test_scalar_map(kind, a, expected):
    assert scalar_map(make(kind), a) == expected


def test_classify_table():
    c = classify(make("transpose"))
    assert (c.algebra, c.linear_over_complex, c.scalar_map_kind) == (
        "reversing", True, "identity")
    c = classify(make("conjugate"))
    assert (c.algebra, c.linear_over_complex, c.scalar_map_kind) == (
        "preserving", False, "conjugation")
    c = classify(StructuredOperator("perm_reversing", P7))
    assert (c.algebra, c.linear_over_complex, c.scalar_map_kind) == (
        "reversing", True, "identity")
    assert classify(make("identity")).algebra == "preserving"
    assert classify(make("perm_similarity")).algebra == "preserving"
    assert not classify(make("conjugate_transpose")).linear_over_complex


@pytest.mark.parametrize("kind", KINDS)
def test_period_two(kind, rng):
    f = make(kind)
    for _ in range(10):
        x = cgauss(rng, M, M)
        np.testing.assert_array_equal(apply(f, apply(f, x)), x)


def test_non_involutive_permutation_flagged():
    assert StructuredOperator("perm_similarity", P7).involutive
    assert not StructuredOperator("perm_similarity", (2, 3, 1)).involutive


@pytest.mark.parametrize("kind", KINDS)
def test_algebra_law(kind, rng):
    f = make(kind, perm=(2, 3, 4, 1))
    for _ in range(10):
        a, b = cgauss(rng, M, M), cgauss(rng, M, M)
        lhs = apply(f, a @ b)
        rhs = (apply(f, b) @ apply(f, a) if f.reversing
               else apply(f, a) @ apply(f, b))
        assert rel(lhs, rhs) <= 1e-10


@pytest.mark.parametrize("kind", KINDS)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_additive_and_homogeneous(kind, seed):
    rng = np.random.default_rng(seed)
    f = make(kind)
    a, b = cgauss(rng, M, M), cgauss(rng, M, M)
    s = complex(*rng.standard_normal(2))
    assert rel(apply(f, a + b), apply(f, a) + apply(f, b)) <= 1e-14
    assert rel(apply(f, s * a), scalar_map(f, s) * apply(f, a)) <= 1e-14


def test_commutation_matrix_examples(rng):
    assert np.array_equal(commutation_matrix(1), [[1]])
    k2 = commutation_matrix(2)
    expected = np.eye(4)[[0, 2, 1, 3]]
    np.testing.assert_array_equal(k2, expected)
    x = cgauss(rng, 2, 2)
    np.testing.assert_array_equal(k2 @ vec(x), vec(x.T))
    k3 = commutation_matrix(3)
    np.testing.assert_array_equal(k3, k3.T)
    np.testing.assert_array_equal(k3 @ k3, np.eye(9))


@pytest.mark.parametrize("m", range(1, 6))
def test_commutation_squared_is_identity(m):
    k = commutation_matrix(m)
    np.testing.assert_array_equal(k @ k, np.eye(m * m))


def test_kf_examples():
    km = kf_matrix(make("identity"), 2)
    assert not km.realified
    np.testing.assert_array_equal(km.matrix, np.eye(4))
    km = kf_matrix(make("transpose"), 2)
    np.testing.assert_array_equal(km.matrix, commutation_matrix(2))
    km = kf_matrix(make("conjugate"), 1)
    assert km.realified
    np.testing.assert_array_equal(km.matrix, np.diag([1.0, -1.0]))


@pytest.mark.parametrize("kind", KINDS)
def test_kf_consistency(kind, rng):
    f = make(kind)
    km = kf_matrix(f, M)
    for _ in range(100):
        x = cgauss(rng, M, M)
        assert np.abs(km(vec(x)) - vec(apply(f, x))).max() <= 1e-12


@pytest.mark.parametrize("k, m, perm", [
    (1, 3, (1, 2, 3)),
    (7, 4, (2, 1, 3, 4)),
    (6, 3, (3, 2, 1)),
])
def test_index_to_permutation(k, m, perm):
    p, P = index_to_permutation(k, m)
    assert p == perm
    np.testing.assert_array_equal(P, np.eye(m)[np.array(perm) - 1])


def test_p7_matrix():
    _, P = index_to_permutation(7, 4)
    np.testing.assert_array_equal(
        P, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


@given(st.integers(1, 5).flatmap(
    lambda m: st.tuples(st.just(m), st.integers(1, factorial(m)))))
def test_lexicographic_order(mk):
    m, k = mk
    if k > 1:
        assert index_to_permutation(k - 1, m)[0] < index_to_permutation(k, m)[0]


@pytest.mark.parametrize("k, m", [(0, 3), (7, 3), (1, 0)])
def test_index_out_of_range(k, m):
    with pytest.raises(IndexOutOfRange):
        index_to_permutation(k, m)


def test_operator_json():
    f = StructuredOperator("perm_reversing", P7)
    assert operator_from_json(operator_to_json(f)) == f
    assert operator_from_json({"kind": "perm_similarity", "perm_index": 7}, 4) == \
        StructuredOperator("perm_similarity", P7)
    assert operator_from_json({"kind": "transpose"}) == make("transpose")
    with pytest.raises(ValueError):
        operator_from_json({"kind": "perm_similarity"}, 4)
    with pytest.raises(ValueError):
        operator_from_json(["transpose"])
