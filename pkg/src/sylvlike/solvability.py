"""Unique-solvability tests for ``A X D + E f(X) B = C``.

The spectral conditions here are sufficient, not necessary, except for the
permutation family where they are exact. Every report carries the
Kronecker ground truth (smallest singular value of the vectorized map) next
to the spectral verdict so the two can be compared.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotTriangular, WrongOperatorClass
from .matrix_core import as_square
from .pencil_lab import (CHORDAL_TOL, chordal_matrix, cluster_mean, homogeneous,
                         pencil_spectra, pencil_spectrum, resolvent_shift)
from .structured_ops import (RealLinearMap, StructuredOperator, apply,
                             kf_matrix, permutation_matrix, realify)

__all__ = [
    "KRON_TOL",
    "SolvabilityReport",
    "kron_operator",
    "kron_nonsingular",
    "term_scale",
    "check_preserving",
    "check_reversing",
    "reciprocal_free",
    "check_generalized",
    "assemble_p",
    "triangular_kron_spectrum",
    "permutation_solvability",
    "permutation_verdicts",
]

# relative singular-value threshold of the vectorized map
KRON_TOL = 1e-10
# cluster radius used to decide the multiplicity of the eigenvalue 1
ONE_TOL = 1e-6


@dataclass
class SolvabilityReport:
    condition_name: str
    holds: bool
    margin: float
    kron_nonsingular: bool
    sigma_min: float
    marginal: bool = False
    details: list = field(default_factory=list)

    def to_dict(self):
        def num(x):
            return None if not np.isfinite(x) else float(x)
        return {
            "condition_name": self.condition_name,
            "holds": bool(self.holds),
            "margin": num(self.margin),
            "kron_nonsingular": bool(self.kron_nonsingular),
            "sigma_min": num(self.sigma_min),
            "marginal": bool(self.marginal),
            "details": self.details,
        }


def _bkron(x, y):
    """Kronecker product over the last two axes of stacked matrices."""
    m, n = x.shape[-2:]
    p, q = y.shape[-2:]
    z = np.einsum("...ij,...kl->...ikjl", x, y)
    return z.reshape(z.shape[:-4] + (m * p, n * q))


def _brealify(a):
    top = np.concatenate([a.real, -a.imag], axis=-1)
    bot = np.concatenate([a.imag, a.real], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def _kron_matrices(A, B, D, E, f):
    m = A.shape[-1]
    left = _bkron(np.swapaxes(D, -1, -2), A)
    right = _bkron(np.swapaxes(B, -1, -2), E)
    kf = kf_matrix(f, m)
    if kf.realified:
        return _brealify(left) + _brealify(right) @ kf.matrix, True
    return left + right @ kf.matrix, False


def _operands(A, B, D=None, E=None):
    A, B = as_square(A, "A"), as_square(B, "B")
    m = A.shape[0]
    D = np.eye(m, dtype=complex) if D is None else as_square(D, "D")
    E = np.eye(m, dtype=complex) if E is None else as_square(E, "E")
    if not A.shape == B.shape == D.shape == E.shape:
        raise DimensionMismatch("A, B, D, E must share one square size")
    return A, B, D, E


def kron_operator(A, B, D=None, E=None, f=None):
    """Vectorized coefficient map ``vec(X) -> vec(A X D + E f(X) B)``.

    Uses ``D^T kron A + (B^T kron E) K_f``; for conjugating `f` the result
    is the real 2m^2 x 2m^2 form.
    """
    A, B, D, E = _operands(A, B, D, E)
    if f.size is not None and f.size != A.shape[0]:
        raise DimensionMismatch(f"{f} does not act on {A.shape[0]}x{A.shape[0]}")
    mat, real = _kron_matrices(A, B, D, E, f)
    return RealLinearMap(mat, realified=real)


def term_scale(*terms):
    """``sum |L|_2 |R|_2`` over the terms ``L X R`` of a linear map.

    Singularity is judged against this as well as against ``sigma_max``: a
    map whose terms cancel to rounding level (``x - x``) is singular even
    though all of its singular values are equally tiny.
    """
    n = lambda x: np.linalg.norm(x, 2, axis=(-2, -1))
    return sum(n(l) * n(r) for l, r in terms)


def kron_nonsingular(A, B, D=None, E=None, f=None, tol=KRON_TOL):
    """Ground-truth uniqueness: ``(sigma_min > tol * scale, sigma_min)`` with
    ``scale = max(sigma_max, |A||D| + |E||B|)``."""
    A, B, D, E = _operands(A, B, D, E)
    s = kron_operator(A, B, D, E, f).singular_values()
    scale = max(s[0], term_scale((A, D), (E, B)))
    return bool(s[-1] > tol * scale), float(s[-1])


def _margin_report(name, p, q, tol, kron, extra=None):
    d = chordal_matrix(p, q)
    margin = float(d.min()) if d.size else np.inf
    details = list(extra or [])
    for i, j in zip(*np.nonzero(d <= tol)):
        details.append({"left": _fmt(p[i]), "right": _fmt(q[j]),
                        "distance": float(d[i, j])})
    return SolvabilityReport(
        condition_name=name, holds=margin > tol, margin=margin,
        kron_nonsingular=kron[0], sigma_min=kron[1],
        marginal=bool(tol / 10 <= margin <= tol * 10), details=details)


def _fmt(pair):
    a, b = pair
    if abs(b) == 0:
        return "inf"
    v = complex(a / b)
    return [v.real, v.imag]


def _eigs(M):
    """Eigenvalues with defective clusters replaced by their means."""
    return cluster_mean(np.linalg.eigvals(M),
                        scale=np.linalg.norm(M, axis=(-2, -1)))


def check_preserving(A, B, f, tol=CHORDAL_TOL):
    """Disjointness of ``sigma(A f(A))`` and ``sigma(B f(B))``."""
    if f.reversing:
        raise WrongOperatorClass(f"{f} is multiplication reversing")
    A, B, _, _ = _operands(A, B)
    p = homogeneous(_eigs(A @ apply(f, A)))
    q = homogeneous(_eigs(B @ apply(f, B)))
    return _margin_report("preserving_spectra", p, q, tol,
                          kron_nonsingular(A, B, f=f))


def check_reversing(A, B, f, tol=CHORDAL_TOL):
    """Disjointness of the spectra of ``A - l f(B)`` and ``B - l f(A)``."""
    if not f.reversing:
        raise WrongOperatorClass(f"{f} is multiplication preserving")
    A, B, _, _ = _operands(A, B)
    kron = kron_nonsingular(A, B, f=f)
    s1 = pencil_spectrum(A, apply(f, B))
    s2 = pencil_spectrum(B, apply(f, A))
    if not (s1.regular and s2.regular):
        which = [n for n, s in (("A - l f(B)", s1), ("B - l f(A)", s2))
                 if not s.regular]
        return SolvabilityReport(
            "reversing_pencils", False, 0.0, kron[0], kron[1],
            details=[{"reason": "singular pencil", "pencils": which}])
    return _margin_report("reversing_pencils", s1.pairs, s2.pairs, tol, kron)


def _scalar_map(s):
    if isinstance(s, StructuredOperator):
        return s.s
    if s in (None, "identity"):
        return lambda a: a
    if s == "conjugation":
        return np.conj
    return s


def reciprocal_free(spectrum, s=None, tol=CHORDAL_TOL):
    """True when no ``lambda_i, lambda_j`` (``i == j`` allowed) satisfy
    ``s(lambda_i) lambda_j = 1``; 0 and infinity count as reciprocals.

    Returns
    -------
    free : bool
    offending : list of (complex, complex)
    """
    smap = _scalar_map(s)
    pairs = spectrum.pairs if hasattr(spectrum, "pairs") else homogeneous(spectrum)
    # 1 / s(alpha/beta) = (s(beta) : s(alpha))
    recip = np.stack([smap(pairs[:, 1]), smap(pairs[:, 0])], axis=-1)
    d = chordal_matrix(recip, pairs)
    vals = _values(pairs)
    offending = [(vals[i], vals[j]) for i, j in zip(*np.nonzero(d <= tol))
                 if i <= j]
    return not offending, offending


def _values(pairs):
    a, b = pairs[:, 0], pairs[:, 1]
    out = np.full(len(a), np.inf, dtype=complex)
    fin = b != 0
    out[fin] = a[fin] / b[fin]
    return out


def _commute(x, y):
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    return np.linalg.norm(x @ y - y @ x) <= 1e-10 * max(nx * ny, 1e-300)


def check_generalized(A, D, E, B, f, tol=CHORDAL_TOL):
    """Sufficient condition for ``A X D + E f(X) B = C``.

    Builds the two pencils obtained by eliminating ``f(X)`` with resolvent
    shifts. When the relevant pairs commute the shift-free pencils are used
    instead (same spectra) and the report says so.

    Raises
    ------
    SingularPencil
        When no resolvent shift exists for one of the eliminating pairs.
    """
    A, B, D, E = _operands(A, B, D, E)
    fA, fB, fD, fE = (apply(f, x) for x in (A, B, D, E))
    kron = kron_nonsingular(A, B, D, E, f)
    if not f.reversing:
        left, right = (E, fA), (B, fD)
        _, z1 = resolvent_shift(*left)
        _, z2 = resolvent_shift(*right)
        full = ((fA @ z1 @ A, E @ z1 @ fE), (fB @ z2 @ B, D @ z2 @ fD))
        reduced = ((fA @ A, E @ fE), (fB @ B, D @ fD))
        name = "generalized_preserving"
    else:
        left, right = (E, fD), (B, fA)
        _, z1 = resolvent_shift(*left)
        _, z2 = resolvent_shift(*right)
        full = ((fD @ z1 @ A, E @ z1 @ fB), (fE @ z2 @ B, D @ z2 @ fA))
        reduced = ((fD @ A, E @ fB), (fE @ B, D @ fA))
        name = "generalized_reversing"
    pencils = full
    if _commute(*left) and _commute(*right):
        pencils, name = reduced, name + "_reduced"
    s1 = pencil_spectrum(*pencils[0])
    s2 = pencil_spectrum(*pencils[1])
    if not (s1.regular and s2.regular):
        return SolvabilityReport(
            name, False, 0.0, kron[0], kron[1],
            details=[{"reason": "singular pencil",
                      "pencils": [i for i, s in enumerate((s1, s2))
                                  if not s.regular]}])
    return _margin_report(name, s1.pairs, s2.pairs, tol, kron)


def assemble_p(A, B, C, D, f):
    """``A kron B + (C kron D) K_f`` for the identity or transpose operator."""
    m = as_square(A).shape[0]
    return np.kron(A, B) + np.kron(C, D) @ kf_matrix(f, m).matrix


def _triangular_side(mats):
    if all(np.allclose(np.tril(x, -1), 0, atol=0) for x in mats):
        return "upper"
    if all(np.allclose(np.triu(x, 1), 0, atol=0) for x in mats):
        return "lower"
    raise NotTriangular("A, B, C, D must all be upper (or all lower) triangular")


def triangular_kron_spectrum(A, B, C, D, f):
    """Eigenvalues of ``A kron B + (C kron D) K_f`` read off the diagonals."""
    mats = [as_square(x, n) for x, n in zip((A, B, C, D), "ABCD")]
    if len({x.shape for x in mats}) != 1:
        raise DimensionMismatch("A, B, C, D must share one size")
    _triangular_side(mats)
    a, b, c, d = (np.diag(x) for x in mats)
    kind = f if isinstance(f, str) else f.kind
    if kind == "identity":
        return (np.outer(a, b) + np.outer(c, d)).ravel()
    if kind != "transpose":
        raise ValueError("only the identity and transpose operators apply")
    m = len(a)
    out = list(a * b + c * d)
    for i in range(m):
        for j in range(i + 1, m):
            blk = np.array([[a[i] * b[j], c[i] * d[j]],
                            [c[j] * d[i], a[j] * b[i]]])
            out.extend(np.linalg.eigvals(blk))
    return np.array(out, dtype=complex)


def permutation_verdicts(A, B, f, tol=CHORDAL_TOL):
    """Vectorized permutation-family test over stacks ``(n, m, m)``.

    Returns ``(holds, margin, kron_ok, sigma_min)`` arrays of length n.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.ndim == 2:
        A, B = A[None], B[None]
    n, m, _ = A.shape
    if f.kind not in ("perm_similarity", "perm_reversing"):
        raise WrongOperatorClass(f"{f} is not a permutation operator")
    if f.size != m:
        raise DimensionMismatch(f"{f} does not act on {m}x{m} matrices")
    P = permutation_matrix(f.perm)
    PtA, PtB = P.T @ A, P.T @ B
    if f.kind == "perm_similarity":
        # P^T A X + X P^T B = P^T C: standard Sylvester
        p = homogeneous(_eigs(PtA))
        q = homogeneous(_eigs(-PtB))
        d = np.abs(p[:, :, None, 0] * q[:, None, :, 1]
                   - q[:, None, :, 0] * p[:, :, None, 1])
        margin = d.reshape(n, -1).min(axis=1)
        holds = margin > tol
    else:
        # P^T A X + X^T P^T B = P^T C: T-Sylvester with pencil P^T A - l B^T P
        pairs, regular = pencil_spectra(PtA, np.swapaxes(B, -1, -2) @ P)
        one = homogeneous(1.0)[0]
        d_one = np.abs(pairs[..., 0] * one[1] - one[0] * pairs[..., 1])
        is_one = d_one <= ONE_TOL
        n_one = is_one.sum(axis=1)
        # chordal(lambda_j, 1/lambda_i) = |alpha_i alpha_j - beta_i beta_j|
        d = np.abs(pairs[:, :, None, 0] * pairs[:, None, :, 0]
                   - pairs[:, :, None, 1] * pairs[:, None, :, 1])
        mask = np.triu(np.ones((m, m), dtype=bool))[None]
        mask = mask & ~is_one[:, :, None] & ~is_one[:, None, :]
        d = np.where(mask, d, np.inf)
        margin = d.reshape(n, -1).min(axis=1)
        margin = np.where(regular, margin, 0.0)
        holds = regular & (n_one <= 1) & (margin > tol)
    I = np.broadcast_to(np.eye(m, dtype=complex), A.shape)
    mats, _ = _kron_matrices(A, B, I, I, f)
    s = np.linalg.svd(mats, compute_uv=False)
    sigma = s[:, -1]
    kron_ok = sigma > KRON_TOL * np.maximum(s[:, 0], term_scale((A, I), (I, B)))
    return holds, margin, kron_ok, sigma


def permutation_solvability(A, B, f, tol=CHORDAL_TOL):
    """Exact unique-solvability test for ``f = P X P^T`` or ``P X^T P^T``.

    For ``P X P^T`` the condition is ``sigma(P^T A)`` disjoint from
    ``sigma(-P^T B)``. For ``P X^T P^T`` the pencil ``P^T A - l B^T P``
    must be regular, reciprocal free away from 1, and have 1 at most as a
    simple eigenvalue.
    """
    A, B, _, _ = _operands(A, B)
    holds, margin, kron_ok, sigma = permutation_verdicts(A, B, f, tol)
    margin = float(margin[0])
    return SolvabilityReport(
        condition_name=f"permutation_{f.kind.split('_')[1]}",
        holds=bool(holds[0]), margin=margin,
        kron_nonsingular=bool(kron_ok[0]), sigma_min=float(sigma[0]),
        marginal=bool(tol / 10 <= margin <= tol * 10))
