"""Seeded random instances for property checks and demos.

Problem kinds:

``generic``
    Gaussian complex ``A, B, C``.
``condition_a`` / ``condition_b``
    One of ``A, B`` gets singular values in ``[0.2, 0.8]`` and the other in
    ``[1.2, 3]`` (which one is random). Every operator in the
    family is a 2-norm isometry, so the spectra of ``A f(A)`` and
    ``B f(B)`` lie in disjoint disks, and the pencils ``A - l f(B)`` and
    ``B - l f(A)`` have their spectra inside and outside the unit circle.
``singular``
    ``B = -f(X0)^{-1} A X0`` for a random ``X0``, which puts ``X0`` in the
    kernel of ``X -> A X + f(X) B``.
"""

import numpy as np

from .errors import DimensionMismatch
from .palindromic import make_qep, qep_eigenvalues
from .solvers import Problem
from .structured_ops import StructuredOperator, apply

__all__ = ["PROBLEM_KINDS", "random_operator", "random_involution",
           "random_problem", "random_qep"]

PROBLEM_KINDS = ("generic", "condition_a", "condition_b", "singular")
MAX_SIZE = 32


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _gauss(rng, m):
    return rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))


def _unitary(rng, m):
    q, r = np.linalg.qr(_gauss(rng, m))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_involution(rng, m):
    """A random permutation of 1..m with ``perm(perm(i)) = i``."""
    perm = np.arange(m)
    idx = rng.permutation(m)
    for a, b in zip(idx[0::2], idx[1::2]):
        if rng.random() < 0.7:
            perm[a], perm[b] = perm[b], perm[a]
    return tuple(int(p) + 1 for p in perm)


def random_operator(kind, m, seed=0, involution=False):
    """Operator of the given kind; perm kinds get a random permutation."""
    rng = _rng(seed)
    if kind not in ("perm_similarity", "perm_reversing"):
        return StructuredOperator(kind)
    perm = (random_involution(rng, m) if involution
            else tuple(int(p) + 1 for p in rng.permutation(m)))
    return StructuredOperator(kind, perm)


def random_problem(m, kind="generic", f="identity", seed=0):
    """A seeded random :class:`Problem` of size `m`.

    `f` is an operator or a kind name. Perm kinds then draw an involutive
    permutation from the same generator, so that every solution route
    applies.
    """
    if not 1 <= m <= MAX_SIZE:
        raise DimensionMismatch(f"m must be in 1..{MAX_SIZE}")
    if kind not in PROBLEM_KINDS:
        raise ValueError(f"unknown problem kind {kind!r}")
    rng = _rng(seed)
    if isinstance(f, str):
        f = random_operator(f, m, rng, involution=True)
    C = _gauss(rng, m)
    if kind == "generic":
        A, B = _gauss(rng, m), _gauss(rng, m)
    elif kind in ("condition_a", "condition_b"):
        small = (_unitary(rng, m) * rng.uniform(0.2, 0.8, m)) @ _unitary(rng, m)
        big = (_unitary(rng, m) * rng.uniform(1.2, 3.0, m)) @ _unitary(rng, m)
        A, B = (small, big) if rng.random() < 0.5 else (big, small)
    else:
        A, X0 = _gauss(rng, m), _gauss(rng, m)
        B = -np.linalg.solve(apply(f, X0), A @ X0)
    return Problem(A=A, B=B, C=C, f=f)


def random_qep(m, f="transpose", seed=0, separation=0.1, max_tries=1000):
    """A random f-palindromic quadratic whose eigenvalues stay at least
    `separation` away from the unit circle (in modulus).

    Transpose instances use real data; the other kinds complex data.
    """
    rng = _rng(seed)
    if isinstance(f, str):
        f = random_operator(f, m, rng, involution=True)
    for _ in range(max_tries):
        A2, M = _gauss(rng, m), _gauss(rng, m)
        if f.kind != "conjugate_transpose":
            A2, M = A2.real, M.real
        q = make_qep(A2, (M + apply(f, M)) / 2, f)
        ev = qep_eigenvalues(q)
        mod = np.abs(ev[:, 0]) / np.maximum(np.abs(ev[:, 1]), 1e-300)
        if np.min(np.abs(mod - 1.0)) > separation:
            return q
    raise RuntimeError("could not draw a well-separated palindromic quadratic")
