import numpy as np
import pytest
from hypothesis import given, strategies as st

from sylvlike.errors import MissingCoefficient, SingularPencil
from sylvlike.pencil_lab import (chordal, cluster_mean, homogeneous,
                                 laurent_coefficients, pencil_spectrum,
                                 rel_cayley_hamilton, relative_charpoly,
                                 resolvent_shift, t_sequence)
from sylvlike.structured_ops import StructuredOperator

from helpers import cgauss, multiset_chordal, rel

T = StructuredOperator("transpose")


def laurent_residual(D, E, L, kmin, kmax):
    """Relative residual of ``D U_k - E U_{k+1} = [k=-1] I``.

    Index k is scaled by ``(|D| + |E|) max_{j <= k+1} |U_j| + 1``, so exact
    zeros computed as rounding noise are judged against the coefficients
    that are actually present.
    """
    m = D.shape[0]
    nd, ne = np.linalg.norm(D), np.linalg.norm(E)
    worst, big = 0.0, 0.0
    for k in range(kmin, kmax):
        big = max(big, np.linalg.norm(L.U(k)), np.linalg.norm(L.U(k + 1)))
        r = D @ L.U(k) - E @ L.U(k + 1) - (np.eye(m) if k == -1 else 0)
        worst = max(worst, np.linalg.norm(r) / ((nd + ne) * big + 1.0))
    return worst


def test_homogeneous_and_chordal():
    h = homogeneous([1.0, np.inf, 0.0])
    np.testing.assert_allclose(np.abs(h).sum(axis=1) ** 0, 1)
    np.testing.assert_allclose(h[1], [1, 0])
    assert chordal(np.inf, np.inf) == 0
    assert chordal(0, np.inf) == pytest.approx(1)
    assert chordal(2, 2 + 1e-12) < 1e-12


def test_cluster_mean_merges_only_close_values():
    v = np.array([1 + 1e-8, 1 - 1e-8, 3.0, np.inf])
    out = cluster_mean(v)
    assert out[0] == out[1] == pytest.approx(1.0, abs=1e-15)
    assert out[2] == 3 and np.isinf(out[3])


@pytest.mark.parametrize("k", [2, 3, 4])
def test_cluster_mean_recovers_defective_roots(k, rng):
    """A k x k Jordan block hidden by a similarity: the computed copies
    spread by ~eps**(1/k), their mean is accurate to rounding."""
    J = np.eye(k, k, 1) + 0.7 * np.eye(k)
    for _ in range(10):
        S = cgauss(rng, k, k)
        M = S @ J @ np.linalg.inv(S)
        out = cluster_mean(np.linalg.eigvals(M), scale=np.linalg.norm(M))
        np.testing.assert_allclose(out, 0.7, atol=1e-10)


def test_cluster_mean_keeps_distinct_roots():
    # a pair 1e-5 apart is far outside the two-fold radius
    v = np.array([0.0, 1e-5, 0.5, 2.0])
    np.testing.assert_array_equal(cluster_mean(v), v)
    # four values inside the four-fold radius are one defective root
    v = np.array([0.0, 1e-4, 2e-4, 3e-4])
    np.testing.assert_allclose(cluster_mean(v), 1.5e-4)
    v = np.array([0.0, 1e-3, 2e-3, 3e-3])
    np.testing.assert_array_equal(cluster_mean(v), v)


def test_spectrum_examples():
    s = pencil_spectrum(np.diag([1.0, 2.0]), np.eye(2))
    assert s.regular and multiset_chordal(s.pairs, homogeneous([1, 2])) < 1e-12
    s = pencil_spectrum(np.eye(2), np.zeros((2, 2)))
    assert s.regular and np.allclose(np.abs(s.pairs), [[1, 0], [1, 0]])
    assert np.all(np.isinf(s.values()))
    s = pencil_spectrum([[0.0]], [[0.0]])
    assert not s.regular and len(s) == 0


def test_spectrum_normalised_and_counted(rng):
    D, E = cgauss(rng, 4, 4), cgauss(rng, 4, 4)
    E[:, 0] = 0
    s = pencil_spectrum(D, E)
    np.testing.assert_allclose(np.linalg.norm(s.pairs, axis=1), 1)
    assert len(s) == 4 and np.isinf(s.values()).sum() == 1


def test_charpoly_examples():
    np.testing.assert_allclose(relative_charpoly(np.diag([1.0, 2.0]), np.eye(2)).coeffs,
                               [2, -3, 1], atol=1e-14)
    np.testing.assert_allclose(relative_charpoly([[3]], [[2]]).coeffs, [3, -2],
                               atol=1e-14)
    assert relative_charpoly(np.eye(2), np.zeros((2, 2))).degree() == 0


def test_charpoly_reproduces_determinant(rng):
    D, E = cgauss(rng, 4, 4), cgauss(rng, 4, 4)
    p = relative_charpoly(D, E)
    for lam in cgauss(rng, 10):
        expected = np.linalg.det(D - lam * E)
        assert abs(p(lam) - expected) <= 1e-8 * max(1, abs(expected))


def test_resolvent_shift_examples():
    g, Z = resolvent_shift(np.eye(2), np.zeros((2, 2)))
    assert g == 0 and np.allclose(Z, np.eye(2))
    g, Z = resolvent_shift([[0.0]], [[1.0]])
    assert g == 1 and np.allclose(Z, [[1]])
    g, Z = resolvent_shift(np.diag([1.0, 0]), np.diag([0, 1.0]))
    assert g == 1 and np.allclose(Z, np.eye(2))


def test_resolvent_shift_singular():
    with pytest.raises(SingularPencil):
        resolvent_shift(np.zeros((2, 2)), np.zeros((2, 2)))


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_resolvent_swap_identity(m, seed):
    rng = np.random.default_rng(seed)
    A, B = cgauss(rng, m, m), cgauss(rng, m, m)
    _, Z = resolvent_shift(A, B)
    assert rel(A @ Z @ B, B @ Z @ A) <= 1e-10


def test_laurent_scalar_examples():
    L = laurent_coefficients([[1.0]], [[1.0]], kmax=6)
    assert L.mu == 0
    np.testing.assert_allclose([L.U(k)[0, 0] for k in range(7)], -1, atol=1e-12)
    L = laurent_coefficients([[1.0]], [[0.0]], kmax=4)
    assert L.mu == 1 and L.U(-1)[0, 0] == pytest.approx(1)
    assert all(abs(L.U(k)[0, 0]) < 1e-12 for k in range(5))
    L = laurent_coefficients([[2.0]], [[3.0]], kmax=6)
    for k in range(7):
        assert L.U(k)[0, 0] == pytest.approx(-(2 / 3) ** k / 3, abs=1e-12)


def test_laurent_nilpotent_index():
    N = np.array([[0.0, 1.0], [0.0, 0.0]])
    L = laurent_coefficients(np.eye(2), N, kmax=3)
    # (I - l N)^{-1} = I + l N
    assert L.mu == 2
    np.testing.assert_allclose(L.U(-1), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(L.U(-2), N, atol=1e-12)


def test_laurent_errors():
    with pytest.raises(SingularPencil):
        laurent_coefficients(np.zeros((2, 2)), np.zeros((2, 2)))
    L = laurent_coefficients([[2.0]], [[3.0]], kmax=2)
    with pytest.raises(MissingCoefficient):
        L.U(3)
    assert np.all(L.U(-5) == 0)


@pytest.mark.parametrize("m", range(1, 6))
def test_laurent_matches_closed_form(m, rng):
    for _ in range(4):
        D, E = cgauss(rng, m, m), cgauss(rng, m, m)
        L = laurent_coefficients(D, E, kmax=6)
        Einv = np.linalg.inv(E)
        G = Einv @ D
        for k in range(7):
            assert rel(L.U(k), -np.linalg.matrix_power(G, k) @ Einv) <= 1e-8
        assert laurent_residual(D, E, L, -m - 1, 6) <= 1e-9


@pytest.mark.parametrize("m", range(1, 6))
def test_laurent_singular_e(m, rng):
    for _ in range(4):
        r = int(rng.integers(0, m))
        D = cgauss(rng, m, m)
        E = cgauss(rng, m, r) @ cgauss(rng, r, m)
        L = laurent_coefficients(D, E, kmax=m + 1)
        assert L.mu >= 1
        assert laurent_residual(D, E, L, -m - 1, m + 1) <= 1e-9
        assert np.all(L.U(-L.mu - 1) == 0)


def test_series_partial_sums_converge(rng):
    m = 3
    D, E = cgauss(rng, m, m), cgauss(rng, m, m)
    L = laurent_coefficients(D, E, kmax=40)
    lam = 2 * L.radius * np.exp(0.7j)
    exact = np.linalg.inv(D - lam * E)
    errs = []
    partial = np.zeros((m, m), dtype=complex)
    for k in range(-L.mu, 41):
        partial = partial + L.U(k) * lam ** (-k - 1)
        errs.append(np.linalg.norm(partial - exact))
    errs = np.array(errs) / np.linalg.norm(exact)
    assert errs[-1] <= 1e-12
    # decreasing until the rounding floor is reached
    above = errs[: np.argmax(errs < 1e-13)]
    assert len(above) > 3 and np.all(np.diff(above[::3]) < 0)


def test_cayley_hamilton_diagonal():
    D = np.diag([1.0, 2.0])
    L = laurent_coefficients(D, np.eye(2), kmax=4)
    p = relative_charpoly(D, np.eye(2))
    np.testing.assert_allclose(rel_cayley_hamilton(p, L, 2), 0, atol=1e-10)
    np.testing.assert_allclose(rel_cayley_hamilton([2, -3, 1], L, 2), 0, atol=1e-10)


@pytest.mark.parametrize("singular_e", [False, True])
def test_cayley_hamilton_vanishes(singular_e, rng):
    for m in range(1, 6):
        D, E = cgauss(rng, m, m), cgauss(rng, m, m)
        if singular_e:
            E[:, -1] = 0
        L = laurent_coefficients(D, E, kmax=m + 1)
        p = relative_charpoly(D, E)
        scale = np.linalg.norm(p.coeffs) * max(
            np.linalg.norm(L.U(k)) for k in range(-m, m + 2))
        for k in (m, m + 1, -1):
            assert np.linalg.norm(rel_cayley_hamilton(p, L, k)) <= 1e-8 * scale
        # away from those indices the combination is generally nonzero
        if not singular_e:
            assert np.linalg.norm(rel_cayley_hamilton(p, L, 0)) > 1e-6 * scale


def test_cayley_hamilton_needs_coefficients():
    L = laurent_coefficients([[2.0]], [[3.0]], kmax=1)
    with pytest.raises(MissingCoefficient):
        rel_cayley_hamilton([3, -2], L, 2)


def test_t_sequence_scalar():
    c = 5.0
    U = laurent_coefficients([[2.0]], [[3.0]], kmax=3)
    V = laurent_coefficients([[3.0]], [[2.0]], kmax=3)
    assert U.U(0)[0, 0] == pytest.approx(-1 / 3)
    assert U.U(1)[0, 0] == pytest.approx(-2 / 9)
    assert V.U(0)[0, 0] == pytest.approx(-1 / 2)
    assert V.U(1)[0, 0] == pytest.approx(-3 / 4)
    T0, T1 = t_sequence(U, V, [[c]], T, 1)
    assert T0[0, 0] == pytest.approx(-c / 6, abs=1e-12)
    assert T1[0, 0] == pytest.approx(-7 * c / 36, abs=1e-12)
    assert all(np.all(t == 0) for t in t_sequence(U, V, [[0.0]], T, 2))


def test_t_sequence_matches_generating_identity(rng):
    """Coefficients of (A - l f(B))^{-1}(C - l f(C))(B - l f(A))^{-1}."""
    m = 3
    A, B, C = (cgauss(rng, m, m) for _ in range(3))
    U = laurent_coefficients(A, B.T, kmax=8)
    V = laurent_coefficients(B, A.T, kmax=8)
    Ts = t_sequence(U, V, C, T, 3)
    R = max(U.radius, V.radius) * 3
    n = 256
    lam = R * np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.array([np.linalg.solve(A - l * B.T, (C - l * C.T)
                                     @ np.linalg.inv(B - l * A.T)) for l in lam])
    # the product is sum_j T_j l^{-j-1}
    for j, Tj in enumerate(Ts):
        coef = np.einsum("n,nij->ij", lam ** (j + 1), vals) / n
        assert rel(coef, Tj) <= 1e-9
