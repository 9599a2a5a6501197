"""f-palindromic quadratic eigenproblems and their f-Riccati equation.

A quadratic ``Q(l) = l^2 A2 + l A1 + A0`` is f-palindromic when
``A0 = f(A2)`` and ``A1 = f(A1)`` for a reversing operator `f`. Its
eigenvalues then come in pairs ``(l, 1/s(l))``.

The linearization used here is ``l F(Z) + Z`` with::

    Z = [[A0, A1 - A2],
         [A0, A0     ]]

whose eigenvectors have the form ``[x; l x]``. Its determinant is
``det Q(-1) det Q(l)``, so it is only a linearization when -1 is not an
eigenvalue; with ``Q(-1)`` singular the Riccati route is unavailable and the
pencil is identically singular. Writing ``Z = [[A, B], [C, D]]``
and congruencing with ``[[I, 0], [X, I]]`` leaves ``l f(R(X)) + R(X)`` in the
trailing block, where

    R(X) = X A f(X) + X B + C f(X) + D.

A root of ``R`` splits the spectrum into two sets of ``m`` eigenvalues that
can be read off from two m x m pencils. Roots are computed by Newton's
method, each step being a generalized Sylvester-like solve.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import (NewtonStepSingular, NotConverged, NotPalindromic,
                     NotUniquelySolvable, OddDimension, ResidualTooLarge,
                     SingularPencil, WrongOperatorClass)
from .matrix_core import PIVOT_TOL, as_square, determinant
from .pencil_lab import chordal_matrix, homogeneous, pencil_spectrum
from .solvers import Problem, solve_kron
from .structured_ops import apply, scalar_map

__all__ = [
    "PalindromicQEP",
    "RiccatiBlocks",
    "NewtonTrace",
    "PairingReport",
    "make_qep",
    "qep_matrix",
    "qep_det",
    "qep_eigenvalues",
    "big_f",
    "build_z",
    "riccati_residual",
    "riccati_root",
    "newton_riccati",
    "qep_eigs_from_riccati",
    "check_pairing",
]

PALINDROME_TOL = 1e-12
PAIR_TOL = 1e-6


@dataclass(frozen=True)
class PalindromicQEP:
    A2: np.ndarray
    A1: np.ndarray
    A0: np.ndarray
    f: object

    @property
    def m(self):
        return self.A2.shape[0]


@dataclass(frozen=True)
class RiccatiBlocks:
    """Blocks of ``Z = [[A, B], [C, D]]``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @property
    def Z(self):
        return np.block([[self.A, self.B], [self.C, self.D]])


@dataclass
class NewtonTrace:
    """``iterates`` holds ``(k, |R(X_k)|, |X_k - X_{k-1}|)``; ``path`` the
    iterates themselves."""

    iterates: list = field(default_factory=list)
    converged: bool = False
    X: np.ndarray = None
    path: list = field(default_factory=list)

    @property
    def steps(self):
        return len(self.iterates) - 1

    def to_dict(self):
        return {
            "iterates": [{"k": k, "residual": float(r), "step": float(d)}
                         for k, r, d in self.iterates],
            "converged": self.converged,
        }


@dataclass
class PairingReport:
    pairs: list
    unmatched: list

    @property
    def ok(self):
        return not self.unmatched


def make_qep(A2, A1, f, tol=PALINDROME_TOL):
    """Palindromic quadratic with ``A0 = f(A2)``.

    Raises
    ------
    NotPalindromic
        If ``f(A1)`` differs from ``A1`` by more than ``tol`` (relative), or
        `f` is a permutation operator whose permutation is not an involution
        (then ``f(A0) != A2`` in general and the pairing is lost).
    """
    if not f.reversing:
        raise WrongOperatorClass(f"{f} is not multiplication reversing")
    A2 = as_square(A2, "A2")
    A1 = as_square(A1, "A1")
    if A1.shape != A2.shape:
        raise NotPalindromic(f"A1 is {A1.shape} but A2 is {A2.shape}")
    if not f.involutive:
        raise NotPalindromic(f"{f} is not of period two")
    gap = np.linalg.norm(apply(f, A1) - A1)
    if gap > tol * max(1.0, np.linalg.norm(A1)):
        raise NotPalindromic(f"f(A1) differs from A1 by {gap:.2e}")
    return PalindromicQEP(A2=A2, A1=A1, A0=apply(f, A2), f=f)


def qep_matrix(q, lam):
    return lam * lam * q.A2 + lam * q.A1 + q.A0


def qep_det(q, lam):
    return determinant(qep_matrix(q, lam))


def qep_eigenvalues(q):
    """All ``2m`` eigenvalues as unit homogeneous pairs (infinite ones have
    ``beta = 0``), from the first companion linearization."""
    m = q.m
    eye, zero = np.eye(m), np.zeros((m, m))
    a = np.block([[zero, eye], [-q.A0, -q.A1]])
    b = np.block([[eye, zero], [zero, q.A2]])
    w = sla.eig(a, b, right=False, homogeneous_eigvals=True)
    return homogeneous_pairs(w[0], w[1])


def homogeneous_pairs(alpha, beta):
    pairs = np.stack([np.asarray(alpha, complex), np.asarray(beta, complex)], -1)
    return pairs / np.linalg.norm(pairs, axis=-1, keepdims=True)


def big_f(f, M):
    """``F(M) = [[f(M1), f(M3)], [f(M2), f(M4)]]`` on the 2x2 block split
    ``M = [[M1, M2], [M3, M4]]``."""
    M = as_square(M, "M")
    n = M.shape[0]
    if n % 2:
        raise OddDimension(f"F needs an even size, got {n}")
    h = n // 2
    m1, m2, m3, m4 = M[:h, :h], M[:h, h:], M[h:, :h], M[h:, h:]
    return np.block([[apply(f, m1), apply(f, m3)],
                     [apply(f, m2), apply(f, m4)]])


def build_z(q):
    return RiccatiBlocks(A=q.A0, B=q.A1 - q.A2, C=q.A0.copy(), D=q.A0.copy())


def riccati_residual(X, blocks, f):
    fX = apply(f, X)
    return X @ blocks.A @ fX + X @ blocks.B + blocks.C @ fX + blocks.D


def riccati_root(q, select=None):
    """A root of the Riccati equation from left eigenvectors of the
    linearization.

    Left eigenvectors of ``l F(Z) + Z`` belonging to one half of the
    spectrum span the rows of ``[X, I]``. By default the half inside the unit
    circle is used; ``select`` may be a boolean mask over the eigenvalues
    returned by :func:`scipy.linalg.eig` on ``(Z, -F(Z))``.
    """
    q1 = qep_matrix(q, -1.0)
    sv = np.linalg.svd(q1, compute_uv=False)
    if not sv[-1] > PIVOT_TOL * max(sv[0], 1.0):
        raise SingularPencil("Q(-1) is singular, so l F(Z) + Z is not regular")
    z = build_z(q).Z
    (alpha, beta), vl = sla.eig(z, -big_f(q.f, z), left=True, right=False,
                                homogeneous_eigvals=True)
    if select is None:
        select = np.abs(alpha) < np.abs(beta)
    m = q.m
    if np.count_nonzero(select) != m:
        raise ValueError(f"selection has {np.count_nonzero(select)} "
                         f"eigenvalues, need {m}")
    Y = vl[:, select].conj().T
    return np.linalg.solve(Y[:, m:], Y[:, :m])


def _scale(blocks):
    return 1.0 + np.linalg.norm(blocks.Z)


def newton_riccati(blocks, f, X0=None, tol=1e-12, maxit=50):
    """Newton's method for ``R(X) = 0``.

    Each step solves
    ``D_k (A f(X_k) + B) + (X_k A + C) f(D_k) = -R(X_k)`` and stops once
    ``|R(X_k)|_F <= tol * (1 + |Z|_F)``.

    Raises
    ------
    NewtonStepSingular
        The step equation is not uniquely solvable at some iterate.
    NotConverged
        ``maxit`` steps without meeting the tolerance. Both errors carry the
        trace so far.
    """
    m = blocks.A.shape[0]
    X = np.zeros((m, m), complex) if X0 is None else as_square(X0, "X0").copy()
    trace = NewtonTrace()
    gate = tol * _scale(blocks)
    step = 0.0
    for k in range(maxit + 1):
        R = riccati_residual(X, blocks, f)
        rnorm = np.linalg.norm(R)
        trace.iterates.append((k, rnorm, step))
        trace.path.append(X.copy())
        trace.X = X
        if rnorm <= gate:
            trace.converged = True
            return trace
        if k == maxit:
            break
        g = blocks.A @ apply(f, X) + blocks.B
        h = X @ blocks.A + blocks.C
        eye = np.eye(m)
        try:
            rep = solve_kron(Problem(A=eye, B=eye, C=-R, f=f, D=g, E=h))
        except NotUniquelySolvable as exc:
            raise NewtonStepSingular(
                f"Newton step {k} is singular (sigma_min={exc.sigma_min:.3e})",
                sigma_min=exc.sigma_min, trace=trace) from exc
        X = X + rep.X
        step = np.linalg.norm(rep.X)
    raise NotConverged(f"no convergence in {maxit} steps "
                       f"(|R| = {trace.iterates[-1][1]:.3e})", trace=trace)


def _s_pairs(pairs, f):
    return scalar_map(f, pairs)


def qep_eigs_from_riccati(blocks, X, f, gate=1e-8):
    """Eigenvalues of the quadratic from a Riccati root.

    Returns the eigenvalues ``s(l)`` for ``l`` in the spectra of
    ``l (A f(X) + B) + f(X A + C)`` and of ``l (X A + C) + f(A f(X) + B)``,
    as two arrays of unit homogeneous pairs. The second set consists of the
    s-reciprocals of the first.

    Raises
    ------
    ResidualTooLarge
        If ``|R(X)| > gate * (1 + |Z|)``.
    """
    res = np.linalg.norm(riccati_residual(X, blocks, f))
    if res > gate * _scale(blocks):
        raise ResidualTooLarge(f"|R(X)| = {res:.3e} above the gate")
    g = blocks.A @ apply(f, X) + blocks.B
    h = X @ blocks.A + blocks.C
    # l P + Q is the pencil Q - l (-P)
    first = pencil_spectrum(apply(f, h), -g).pairs
    second = pencil_spectrum(apply(f, g), -h).pairs
    return _s_pairs(first, f), _s_pairs(second, f)


def check_pairing(eigs, s, tol=PAIR_TOL):
    """Match eigenvalues into s-reciprocal pairs ``(l, 1/s(l))``.

    `eigs` are complex values or homogeneous pairs (``inf`` allowed for
    values); `s` is an operator or any callable scalar map. Candidate pairs
    are accepted greedily in order of chordal distance; ``0`` and ``inf``
    are reciprocal.
    """
    eigs = np.asarray(eigs)
    pairs = (homogeneous_pairs(eigs[:, 0], eigs[:, 1])
             if eigs.ndim == 2 else homogeneous(eigs))
    smap = s if callable(s) and not hasattr(s, "kind") else (
        lambda a: scalar_map(s, a))
    # 1/s(a/b) = s(b)/s(a)
    recip = np.stack([smap(pairs[:, 1]), smap(pairs[:, 0])], -1)
    dist = chordal_matrix(pairs, recip)
    n = len(pairs)
    iu, ju = np.triu_indices(n, k=1)
    d = np.maximum(dist[iu, ju], dist[ju, iu])
    order = np.argsort(d, kind="stable")
    used = np.zeros(n, bool)
    matched = []
    for o in order:
        if d[o] > tol:
            break
        i, j = iu[o], ju[o]
        if not used[i] and not used[j]:
            used[i] = used[j] = True
            matched.append((i, j))
    values = _as_values(pairs)
    return PairingReport(
        pairs=[(values[i], values[j]) for i, j in matched],
        unmatched=[values[i] for i in np.flatnonzero(~used)])


def _as_values(pairs):
    out = []
    for a, b in pairs:
        out.append(complex(np.inf) if abs(b) <= 1e-14 * abs(a) else complex(a / b))
    return out
