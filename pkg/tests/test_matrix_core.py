import numpy as np
import pytest
from hypothesis import given, strategies as st

from sylvlike.errors import DimensionMismatch, SingularMatrix
from sylvlike.matrix_core import (as_matrix, determinant, eigenvalues,
                                  matrix_from_json, matrix_to_json,
                                  solve_linear, unvec, vec)
from sylvlike.pencil_lab import relative_charpoly

from helpers import cgauss, multiset_chordal, rel


def test_solve_identity_returns_rhs(rng):
    b = cgauss(rng, 3, 2)
    np.testing.assert_allclose(solve_linear(np.eye(3), b), b)


def test_solve_scalar_division():
    assert solve_linear([[2]], [[10]])[0, 0] == pytest.approx(5)


def test_solve_back_substitution():
    x = solve_linear([[1, 1], [0, 1]], [[3], [2]])
    np.testing.assert_allclose(x, [[1], [2]])


def test_solve_singular_raises():
    with pytest.raises(SingularMatrix):
        solve_linear([[1, 2], [2, 4]], [1, 1])
    with pytest.raises(SingularMatrix):
        solve_linear(np.zeros((2, 2)), [1, 1])


def test_solve_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_linear(np.eye(2), np.ones(3))


def test_solve_recovers_rhs_well_conditioned(rng):
    for _ in range(20):
        q, _ = np.linalg.qr(cgauss(rng, 8, 8))
        a = q * rng.uniform(1, 3, 8)
        b = cgauss(rng, 8, 3)
        assert rel(a @ solve_linear(a, b), b) <= 1e-10


@pytest.mark.parametrize("a, expected", [
    (np.eye(4), 1.0),
    (np.diag([1.0, 2.0, 3.0]), 6.0),
    ([[0, 1], [1, 0]], -1.0),
    ([[1, 2], [2, 4]], 0.0),
])
def test_determinant_examples(a, expected):
    assert determinant(a) == pytest.approx(expected)


def test_determinant_multiplicative(rng):
    for _ in range(20):
        a, b = cgauss(rng, 6, 6), cgauss(rng, 6, 6)
        lhs = determinant(a @ b)
        assert abs(lhs - determinant(a) * determinant(b)) <= 1e-10 * abs(lhs)


def test_eigenvalue_examples():
    assert multiset_chordal(eigenvalues(np.diag([1.0, 2, 3])), [1, 2, 3]) < 1e-12
    assert multiset_chordal(eigenvalues([[0, 1], [-1, 0]]), [1j, -1j]) < 1e-12


def test_eigenvalues_match_charpoly_roots(rng):
    a = cgauss(rng, 5, 5)
    p = relative_charpoly(a, np.eye(5)).coeffs
    roots = np.roots(p[::-1])
    assert multiset_chordal(eigenvalues(a), roots) <= 1e-8


def test_eigenvalues_determinant_gate(rng):
    a = cgauss(rng, 6, 6)
    scale = np.linalg.norm(a, 2) ** 6
    for lam in eigenvalues(a):
        assert abs(determinant(a - lam * np.eye(6))) <= 1e-8 * scale


def test_eigenvalue_sum_is_trace(rng):
    for m in range(1, 9):
        a = cgauss(rng, m, m)
        tr = np.trace(a)
        assert abs(eigenvalues(a).sum() - tr) <= 1e-8 * max(1, abs(tr), np.linalg.norm(a))


def test_eigenvalues_size_cap():
    with pytest.raises(DimensionMismatch):
        eigenvalues(np.eye(65))


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        as_matrix([[np.nan]])
    with pytest.raises(DimensionMismatch):
        as_matrix(np.ones((2, 2, 2)))
    assert as_matrix(3).shape == (1, 1)


def test_vec_is_column_major():
    x = np.array([[1, 2], [3, 4]])
    np.testing.assert_array_equal(vec(x), [1, 3, 2, 4])
    np.testing.assert_array_equal(unvec(vec(x), 2), x)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_json_round_trip_is_bit_exact(rows, cols, seed):
    rng = np.random.default_rng(seed)
    a = cgauss(rng, rows, cols)
    b = matrix_from_json(matrix_to_json(a))
    assert np.array_equal(a, b)


def test_json_im_optional_and_validated():
    a = matrix_from_json({"rows": 1, "cols": 2, "re": [[1, 2]]})
    assert a.dtype == complex and np.all(a.imag == 0)
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 2, "cols": 2, "re": [[1, 2]]})
    with pytest.raises(ValueError):
        matrix_from_json({"re": [[1]]})
