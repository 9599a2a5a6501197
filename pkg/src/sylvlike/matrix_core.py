"""Dense complex matrix primitives.

Every matrix in the package is a 2-D ``complex128`` ndarray; real input is
promoted. The helpers here validate operands, wrap pivoted LU for solves and
determinants, and convert matrices to and from the JSON matrix schema::

    {"rows": int, "cols": int, "re": [[...], ...], "im": [[...], ...]}

where ``im`` is optional and defaults to zeros.
"""

import warnings

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceFailure, DimensionMismatch, SingularMatrix

__all__ = [
    "PIVOT_TOL",
    "VERIFY_TOL",
    "as_matrix",
    "as_square",
    "solve_linear",
    "determinant",
    "eigenvalues",
    "vec",
    "unvec",
    "matrix_to_json",
    "matrix_from_json",
]

# relative pivot / rank tolerance
PIVOT_TOL = 1e-12
# relative tolerance used when verifying computed results
VERIFY_TOL = 1e-8


def as_matrix(a, name="matrix"):
    """Return `a` as a finite 2-D complex array (scalars become 1x1)."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_square(a, name="matrix"):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    return m


def _lu(a):
    with warnings.catch_warnings():
        # exact zero pivots are handled by the callers
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    return lu, piv


def solve_linear(a, b, pivot_tol=PIVOT_TOL):
    """Solve ``a @ x = b`` by LU with partial pivoting.

    Parameters
    ----------
    a : (m, m) array_like
    b : (m,) or (m, k) array_like
    pivot_tol : float
        A pivot smaller than ``pivot_tol * max|a_ij|`` is treated as zero.

    Raises
    ------
    SingularMatrix
        If a pivot falls below the threshold.
    """
    a = as_square(a, "A")
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch(
            f"right-hand side has {b.shape[0]} rows, expected {a.shape[0]}")
    scale = np.abs(a).max() if a.size else 0.0
    if scale == 0.0:
        raise SingularMatrix("coefficient matrix is zero")
    lu, piv = _lu(a)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < pivot_tol * scale:
        raise SingularMatrix(
            f"pivot {pivots.min():.3e} below {pivot_tol:.1e} * {scale:.3e}")
    return sla.lu_solve((lu, piv), b, check_finite=False)


def determinant(a):
    """Determinant from the LU factors, with the permutation sign."""
    a = as_square(a, "A")
    if a.shape[0] == 0:
        return 1.0 + 0.0j
    lu, piv = _lu(a)
    swaps = np.count_nonzero(piv != np.arange(a.shape[0]))
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))


def eigenvalues(a):
    """Eigenvalues of a square matrix (with multiplicity), via LAPACK QR."""
    a = as_square(a, "A")
    if a.shape[0] > 64:
        raise DimensionMismatch("eigenvalues supports m <= 64")
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def vec(x):
    """Stack the columns of `x` into one vector (column-major)."""
    return np.asarray(x).reshape(-1, order="F")


def unvec(v, m):
    return np.asarray(v).reshape(m, -1, order="F")


def matrix_to_json(a):
    a = np.asarray(a, dtype=complex)
    out = {"rows": int(a.shape[0]), "cols": int(a.shape[1]),
           "re": a.real.tolist()}
    if np.any(a.imag != 0):
        out["im"] = a.imag.tolist()
    return out


def matrix_from_json(obj, name="matrix"):
    """Parse a JSON matrix object; shapes are checked against rows/cols."""
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.array(obj["re"], dtype=float).reshape(rows, cols)
        im = obj.get("im")
        im = (np.zeros_like(re) if im is None
              else np.array(im, dtype=float).reshape(rows, cols))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad matrix object for {name}: {exc}") from exc
    return as_matrix(re + 1j * im, name)
