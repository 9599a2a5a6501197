"""Solvers for ``A X + f(X) B = C`` and ``A X D + E f(X) B = C``.

Three routes are available:

* ``solve_kron`` -- the vectorized linear system; always applicable and used
  as the reference answer.
* ``reduce_preserving`` / ``reduce_reversing`` -- eliminate ``f(X)`` to get
  a standard or generalized Sylvester equation in ``X`` alone.
* ``closed_form_preserving`` / ``closed_form_reversing`` -- explicit
  formulas built from characteristic polynomials and, for reversing
  operators, Laurent coefficients of the two pencils ``A - l f(B)`` and
  ``B - l f(A)``.

The reduced equations have more solutions than the original one in
general, so every route re-checks its answer against the original equation.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (NotUniquelySolvable, QuadratureNotConverged, ResidualCheckFailed,
                     SingularClosedFormMatrix, SingularPencil,
                     WrongOperatorClass, DimensionMismatch)
from .matrix_core import PIVOT_TOL, VERIFY_TOL, as_square, unvec, vec
from .pencil_lab import (laurent_coefficients, rel_cayley_hamilton,
                         relative_charpoly, resolvent_shift, t_sequence)
from .solvability import (KRON_TOL, check_generalized, check_preserving,
                          check_reversing, kron_operator, term_scale)
from .structured_ops import StructuredOperator, apply, realify

__all__ = [
    "Problem",
    "SolveReport",
    "relative_residual",
    "solve_kron",
    "reduce_preserving",
    "reduce_reversing",
    "closed_form_preserving",
    "closed_form_reversing",
    "solve",
    "analyze",
]


@dataclass(frozen=True)
class Problem:
    """``A X D + E f(X) B = C``; `D` and `E` default to the identity."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    f: StructuredOperator
    D: np.ndarray = None
    E: np.ndarray = None

    def __post_init__(self):
        mats = {}
        for name in "ABC":
            mats[name] = as_square(getattr(self, name), name)
        m = mats["A"].shape[0]
        for name in "DE":
            val = getattr(self, name)
            mats[name] = None if val is None else as_square(val, name)
        for name, val in mats.items():
            if val is not None and val.shape != (m, m):
                raise DimensionMismatch(f"{name} is {val.shape}, expected {(m, m)}")
        if self.f.size is not None and self.f.size != m:
            raise DimensionMismatch(f"{self.f} does not act on {m}x{m} matrices")
        for name, val in mats.items():
            object.__setattr__(self, name, val)

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def generalized(self):
        eye = np.eye(self.m)
        return any(x is not None and not np.array_equal(x, eye)
                   for x in (self.D, self.E))

    @property
    def Dm(self):
        return np.eye(self.m, dtype=complex) if self.D is None else self.D

    @property
    def Em(self):
        return np.eye(self.m, dtype=complex) if self.E is None else self.E

    def lhs(self, X):
        return self.A @ X @ self.Dm + self.Em @ apply(self.f, X) @ self.B


@dataclass
class SolveReport:
    X: np.ndarray
    method: str
    residual: float
    sigma_min: float
    warnings: list = field(default_factory=list)
    solvability: object = None

    def to_dict(self):
        from .matrix_core import matrix_to_json
        out = {
            "X": matrix_to_json(self.X),
            "method": self.method,
            "residual": float(self.residual),
            "sigma_min": float(self.sigma_min),
            "warnings": list(self.warnings),
        }
        if self.solvability is not None:
            out["solvability"] = self.solvability.to_dict()
        return out


def relative_residual(p, X):
    """``|A X D + E f(X) B - C|_F`` over the sum of the term norms plus 1."""
    n = np.linalg.norm
    nx = n(X)
    den = (n(p.A) * nx * n(p.Dm) + n(p.Em) * nx * n(p.B) + n(p.C) + 1.0)
    return float(n(p.lhs(X) - p.C) / den)


def _report(p, X, method, sigma_min, warnings=(), verify_tol=None):
    res = relative_residual(p, X)
    if verify_tol is not None and not res <= verify_tol:
        raise ResidualCheckFailed(
            f"{method}: residual {res:.2e} exceeds {verify_tol:.1e} on the "
            "original equation", residual=res)
    return SolveReport(X=X, method=method, residual=res, sigma_min=sigma_min,
                       warnings=list(warnings))


def _solve_map(lmap, rhs, m, tol, what, scale=0.0):
    s = lmap.singular_values()
    if not s[-1] > tol * max(s[0], scale):
        raise NotUniquelySolvable(
            f"{what} is singular (sigma_min={s[-1]:.3e})", sigma_min=s[-1])
    return unvec(lmap.solve(vec(rhs)), m), float(s[-1])


def solve_kron(p, tol=KRON_TOL):
    """Solve through the (possibly realified) vectorized system."""
    lmap = kron_operator(p.A, p.B, p.Dm, p.Em, p.f)
    X, smin = _solve_map(lmap, p.C, p.m, tol, "vectorized map",
                         term_scale((p.A, p.Dm), (p.Em, p.B)))
    return _report(p, X, "kron", smin)


def _sylvester_terms(terms, rhs, tol, what):
    """Solve ``sum_i L_i X R_i = rhs`` (complex-linear in X) by Kronecker."""
    from .structured_ops import RealLinearMap
    m = rhs.shape[0]
    mat = sum(np.kron(r.T, l) for l, r in terms)
    return _solve_map(RealLinearMap(mat, realified=False), rhs, m, tol, what,
                      term_scale(*terms))


def _require(p, reversing):
    if p.generalized:
        raise WrongOperatorClass("the generalized equation is solved by kron only")
    if not p.f.involutive:
        # the eliminations below apply f twice and need f(f(X)) = X
        raise WrongOperatorClass(f"{p.f} is not of period two")
    if p.f.reversing != reversing:
        kind = "reversing" if reversing else "preserving"
        raise WrongOperatorClass(f"{p.f} is not multiplication {kind}")


def reduce_preserving(p, tol=KRON_TOL, verify_tol=VERIFY_TOL):
    """Solve ``X (f(B) B) - (f(A) A) X = f(C) B - f(A) C``."""
    _require(p, reversing=False)
    f = p.f
    fA, fB, fC = apply(f, p.A), apply(f, p.B), apply(f, p.C)
    cA, cB, cC = fA @ p.A, fB @ p.B, fC @ p.B - fA @ p.C
    eye = np.eye(p.m)
    X, smin = _sylvester_terms([(eye, cB), (-cA, eye)], cC, tol,
                               "reduced Sylvester equation")
    return _report(p, X, "reduction", smin, verify_tol=verify_tol)


def reduce_reversing(p, tol=KRON_TOL, verify_tol=VERIFY_TOL):
    """Solve the generalized Sylvester equation
    ``A X Z f(A) - f(B) X Z B = C Z f(A) - f(C) Z B`` with
    ``Z = (B + l0 f(A))^{-1}``."""
    _require(p, reversing=True)
    f = p.f
    fA, fB, fC = apply(f, p.A), apply(f, p.B), apply(f, p.C)
    lam0, Z = resolvent_shift(p.B, fA)
    rhs = p.C @ Z @ fA - fC @ Z @ p.B
    X, smin = _sylvester_terms([(p.A, Z @ fA), (-fB, Z @ p.B)], rhs, tol,
                               "reduced generalized Sylvester equation")
    rep = _report(p, X, "reduction", smin, verify_tol=verify_tol)
    rep.warnings.append(f"resolvent shift {lam0}")
    return rep


def _charpoly(M):
    """Ascending coefficients of ``det(l I - M)``."""
    m = M.shape[0]
    return (-1) ** m * relative_charpoly(M, np.eye(m)).coeffs


def _matpoly(coeffs, M):
    out = np.zeros_like(M)
    for c in coeffs[::-1]:
        out = out @ M + c * np.eye(M.shape[0])
    return out


def _check_invertible(M, what):
    s = np.linalg.svd(M, compute_uv=False)
    if not s[-1] > PIVOT_TOL * s[0]:
        raise SingularClosedFormMatrix(
            f"{what} is singular (sigma_min={s[-1]:.3e})", sigma_min=s[-1])
    return float(s[-1])


def closed_form_preserving(p, variant="chA", verify_tol=VERIFY_TOL):
    """Explicit solution from characteristic polynomials.

    With ``cA = f(A) A``, ``cB = f(B) B``, ``cC = f(C) B - f(A) C`` and the
    telescoping sum ``S(q) = sum_i q_i sum_{k<i} cA^k cC cB^{i-k-1}``:

    * ``variant="chA"``: ``X = S(p) ch_cA(cB)^{-1}``, p from ``det(l - cA)``
    * ``variant="chB"``: ``X = -ch_cB(cA)^{-1} S(q)``, q from ``det(l - cB)``
    """
    _require(p, reversing=False)
    f = p.f
    fA, fB, fC = apply(f, p.A), apply(f, p.B), apply(f, p.C)
    cA, cB, cC = fA @ p.A, fB @ p.B, fC @ p.B - fA @ p.C
    m = p.m
    powA = [np.eye(m, dtype=complex)]
    powB = [np.eye(m, dtype=complex)]
    for _ in range(m):
        powA.append(powA[-1] @ cA)
        powB.append(powB[-1] @ cB)
    if variant == "chA":
        q = _charpoly(cA)
    elif variant == "chB":
        q = _charpoly(cB)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    S = np.zeros((m, m), dtype=complex)
    for i in range(1, m + 1):
        inner = sum(powA[k] @ cC @ powB[i - k - 1] for k in range(i))
        S += q[i] * inner
    if variant == "chA":
        M = _matpoly(q, cB)
        smin = _check_invertible(M, "ch_cA(cB)")
        X = np.linalg.solve(M.T, S.T).T
    else:
        M = _matpoly(q, cA)
        smin = _check_invertible(M, "ch_cB(cA)")
        X = -np.linalg.solve(M, S)
    return _report(p, X, "closed_form_preserving", smin, verify_tol=verify_tol)


def _reversing_core(A, B, C, f):
    """``f(X) = M^{-1} sum_j p_j T_j`` with ``M = ch_{B,f(A)}(U_m)``."""
    m = A.shape[0]
    fA, fB = apply(f, A), apply(f, B)
    U = laurent_coefficients(A, fB, kmax=2 * m)
    V = laurent_coefficients(B, fA, kmax=2 * m)
    p = relative_charpoly(B, fA)
    T = t_sequence(U, V, C, f, m)
    S = sum(pj * Tj for pj, Tj in zip(p.coeffs, T))
    M = rel_cayley_hamilton(p, U, m)
    gate = rel_cayley_hamilton(p, V, m)
    vmax = max(np.linalg.norm(V.U(k)) for k in range(-V.mu, m + 1))
    if np.linalg.norm(gate) > 1e-8 * np.linalg.norm(p.coeffs) * vmax:
        raise ResidualCheckFailed(
            "ch_{B,f(A)}(V_m) does not vanish; Laurent coefficients are off",
            residual=float(np.linalg.norm(gate)))
    smin = _check_invertible(M, "ch_{B,f(A)}(U_m)")
    return apply(f, np.linalg.solve(M, S)), smin, (U, V, p, T, M)


def _nonsingular(M):
    s = np.linalg.svd(M, compute_uv=False)
    return s[0] > 0 and s[-1] > PIVOT_TOL * s[0]


# residual at which the direct reversing route is accepted without trying the
# transformed one
_GOOD_ENOUGH = 1e-13


def closed_form_reversing(p, verify_tol=VERIFY_TOL, return_parts=False):
    """Explicit solution for multiplication reversing `f`.

    Matching powers of ``l`` in
    ``X (B - l f(A))^{-1} + (A - l f(B))^{-1} f(X)
    = (A - l f(B))^{-1} (C - l f(C)) (B - l f(A))^{-1}`` gives
    ``X V_j + U_j f(X) = T_j``. Weighting by the coefficients of
    ``det(B - l f(A))`` annihilates the V terms, leaving
    ``M f(X) = sum_j p_j T_j``.

    `M` is invertible when `B` is. The same construction applies to the
    equivalent equation ``f(B) X + f(X) f(A) = f(C)``, which needs `A`
    invertible instead. The direct route is tried first; if its residual is
    not already at rounding level the other route is evaluated as well and
    the smaller residual wins, since the Laurent coefficients of the pencil
    with the larger spectral radius grow quickly.
    With `A` and `B` both singular, 0 and infinity are both eigenvalues of
    ``A - l f(B)``, a reciprocal pair, so the vectorized solver is consulted
    and reports the loss of uniqueness.
    """
    _require(p, reversing=True)
    f = p.f
    routes = []
    if _nonsingular(p.B):
        routes.append(("direct", (p.A, p.B, p.C)))
    if _nonsingular(p.A):
        routes.append(("transformed",
                       (apply(f, p.B), apply(f, p.A), apply(f, p.C))))
    if not routes:
        rep = solve_kron(p)
        rep.warnings.append("A and B singular: closed form unavailable, "
                            "fell back to the vectorized solver")
        return (rep, None) if return_parts else rep
    best = None
    for name, (a, b, c) in routes:
        try:
            X, smin, parts = _reversing_core(a, b, c, f)
        except (SingularClosedFormMatrix, ResidualCheckFailed,
                QuadratureNotConverged, SingularPencil):
            # a nearly singular A or B can still defeat one route
            if name == routes[-1][0] and best is None:
                raise
            continue
        res = relative_residual(p, X)
        if best is None or res < best[0]:
            best = (res, name, X, smin, parts)
        if res <= _GOOD_ENOUGH:
            break
    _, name, X, smin, parts = best
    warnings = [] if name == "direct" else [
        "solved the equivalent equation f(B) X + f(X) f(A) = f(C)"]
    rep = _report(p, X, "closed_form_reversing", smin, warnings, verify_tol)
    return (rep, parts) if return_parts else rep


def analyze(p, tol=None):
    """Sufficient-condition report matching the structure of `p`."""
    kw = {} if tol is None else {"tol": tol}
    if p.generalized:
        return check_generalized(p.A, p.Dm, p.Em, p.B, p.f, **kw)
    if p.f.reversing:
        return check_reversing(p.A, p.B, p.f, **kw)
    return check_preserving(p.A, p.B, p.f, **kw)


def solve(p, method="auto", verify_tol=VERIFY_TOL):
    """Dispatch to a solution route and attach the solvability report.

    ``method`` is one of ``auto``, ``kron``, ``reduction``, ``closed_form``.
    ``auto`` tries the reduction first and falls back to ``kron`` when the
    reduction does not apply or fails; the generalized equation always goes
    to ``kron``.
    """
    method = method.replace("-", "_")
    try:
        report = analyze(p)
    except SingularPencil:
        report = None
    if method == "kron" or (method == "auto" and p.generalized):
        rep = solve_kron(p)
    elif method == "auto":
        try:
            rep = _reduce(p, verify_tol)
        except (NotUniquelySolvable, SingularPencil, ResidualCheckFailed,
                WrongOperatorClass) as exc:
            rep = solve_kron(p)
            rep.warnings.append(f"reduction failed ({exc}); used kron")
    elif method == "reduction":
        rep = _reduce(p, verify_tol)
    elif method == "closed_form":
        if p.f.reversing:
            rep = closed_form_reversing(p, verify_tol)
        else:
            rep = closed_form_preserving(p, verify_tol=verify_tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    rep.solvability = report
    return rep


def _reduce(p, verify_tol):
    if p.f.reversing:
        return reduce_reversing(p, verify_tol=verify_tol)
    return reduce_preserving(p, verify_tol=verify_tol)
