"""Regular matrix pencils ``D - lambda E``.

Spectra are kept as homogeneous pairs ``(alpha, beta)`` normalised to unit
length, with ``beta = 0`` for an infinite eigenvalue, and compared in the
chordal metric ``|alpha1*beta2 - alpha2*beta1|``.

The Laurent coefficients ``U_k`` are those of the expansion at infinity::

    (D - lambda E)^{-1} = sum_{k >= -mu} U_k lambda^{-k-1},

obtained by trapezoidal quadrature on a circle enclosing every finite
eigenvalue. They satisfy ``D U_{-1} - E U_0 = I`` and ``D U_k = E U_{k+1}``
otherwise.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatch, MissingCoefficient,
                     QuadratureNotConverged, SingularPencil)
from .matrix_core import PIVOT_TOL, as_square
from .structured_ops import apply

__all__ = [
    "CHORDAL_TOL",
    "PencilSpectrum",
    "RelCharPoly",
    "LaurentExpansion",
    "homogeneous",
    "cluster_mean",
    "chordal",
    "chordal_matrix",
    "relative_charpoly",
    "pencil_spectrum",
    "pencil_spectra",
    "resolvent_shift",
    "laurent_coefficients",
    "rel_cayley_hamilton",
    "t_sequence",
]

CHORDAL_TOL = 1e-8
DEGREE_TOL = 1e-10
# base cluster radius; a defective k-fold root is only accurate to
# ~eps**(1/k), while the mean of its cluster is accurate to ~eps
CLUSTER_TOL = 1e-6
LAURENT_TOL = 1e-9


def homogeneous(values):
    """Normalised homogeneous pairs for complex values (``inf`` allowed)."""
    v = np.atleast_1d(np.asarray(values, dtype=complex))
    out = np.empty(v.shape + (2,), dtype=complex)
    inf = ~np.isfinite(v)
    fin = ~inf
    nrm = np.sqrt(1.0 + np.abs(v[fin]) ** 2)
    out[fin, 0] = v[fin] / nrm
    out[fin, 1] = 1.0 / nrm
    out[inf] = (1.0, 0.0)
    return out


def _radius(k, tol, scale):
    """Cluster radius for a group of `k` computed copies of one root."""
    eps = np.finfo(float).eps
    return np.maximum(tol, 4.0 * eps ** (1.0 / np.maximum(k, 1)) * scale)


def _reach(d, fin, tol):
    m = d.shape[-1]
    adj = (d <= tol) & fin[..., :, None] & fin[..., None, :]
    reach = (adj | np.eye(m, dtype=bool)).astype(float)
    for _ in range(int(np.ceil(np.log2(m))) + 1):
        reach = np.minimum(reach @ reach, 1.0)
    return reach > 0


def cluster_mean(values, tol=CLUSTER_TOL, scale=None):
    """Replace eigenvalues lying close together (chordal, transitively) by
    the mean of their cluster. Works on stacks ``(..., m)``.

    A k-fold defective root of a matrix ``M`` is computed with a spread of
    about ``eps**(1/k) |M|``, so a cluster of size k may have diameter up
    to ``max(tol, 4 eps**(1/k) scale)``, with ``scale`` at least 1. Pass
    ``|M|_F`` when the matrix is known; polynomial roots use the degree.
    Stacks whose wide clusters violate the bound are clustered at `tol`.
    """
    v = np.asarray(values, dtype=complex)
    m = v.shape[-1]
    if m < 2:
        return v.copy()
    fin = np.isfinite(v)
    scale = np.maximum(1.0, np.asarray(1.0 if scale is None else scale,
                                       dtype=float))[..., None]
    h = homogeneous(v.reshape(-1)).reshape(v.shape + (2,))
    d = np.abs(h[..., :, None, 0] * h[..., None, :, 1]
               - h[..., None, :, 0] * h[..., :, None, 1])
    reach = _reach(d, fin, _radius(m, tol, scale)[..., None])
    size = reach.sum(axis=-1)
    diam = np.where(reach, d, 0.0).max(axis=-1)
    ok = np.all(diam <= _radius(size, tol, scale), axis=-1)
    reach = np.where(ok[..., None, None], reach, _reach(d, fin, tol))
    w = reach.astype(float)
    vz = np.where(fin, v, 0)
    avg = np.einsum("...ij,...j->...i", w, vz) / w.sum(axis=-1)
    return np.where(fin, avg, v)


def chordal_matrix(p, q):
    """Pairwise chordal distances between two arrays of homogeneous pairs."""
    p = np.asarray(p).reshape(-1, 2)
    q = np.asarray(q).reshape(-1, 2)
    return np.abs(p[:, None, 0] * q[None, :, 1] - q[None, :, 0] * p[:, None, 1])


def chordal(a, b):
    """Chordal distance between two scalars (``inf`` allowed)."""
    return float(chordal_matrix(homogeneous(a), homogeneous(b))[0, 0])


@dataclass(frozen=True)
class RelCharPoly:
    """Coefficients ``p_0 .. p_m`` of ``det(D - lambda E)``, ascending."""

    coeffs: np.ndarray

    @property
    def m(self):
        return len(self.coeffs) - 1

    def __call__(self, lam):
        return np.polyval(self.coeffs[::-1], lam)

    def degree(self, tol=DEGREE_TOL):
        mag = np.abs(self.coeffs)
        if mag.max() == 0:
            return -1
        return int(np.nonzero(mag > tol * mag.max())[0][-1])


@dataclass(frozen=True)
class PencilSpectrum:
    pairs: np.ndarray           # (k, 2) homogeneous pairs
    regular: bool

    def values(self):
        """Eigenvalues as complex numbers, ``inf`` for infinite ones."""
        a, b = self.pairs[:, 0], self.pairs[:, 1]
        out = np.full(len(a), np.inf, dtype=complex)
        fin = b != 0
        out[fin] = a[fin] / b[fin]
        return out

    def finite(self):
        return self.values()[self.pairs[:, 1] != 0]

    def __len__(self):
        return len(self.pairs)


def _stack(D, E):
    D = np.asarray(D, dtype=complex)
    E = np.asarray(E, dtype=complex)
    if D.shape != E.shape or D.shape[-1] != D.shape[-2]:
        raise DimensionMismatch(f"pencil needs equal square sizes, got "
                                f"{D.shape} and {E.shape}")
    return D, E


def _charpoly_batch(D, E):
    """Batched relative characteristic polynomial.

    Returns coefficients ``(..., m+1)`` and a regularity mask. ``det`` is
    sampled at ``m+1`` roots of unity scaled by ``max(1, |D|/|E|)`` and the
    interpolation is a DFT.
    """
    m = D.shape[-1]
    nd = np.linalg.norm(D, axis=(-2, -1))
    ne = np.linalg.norm(E, axis=(-2, -1))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(ne > 0, np.maximum(1.0, nd / np.where(ne > 0, ne, 1)), 1.0)
    omega = np.exp(2j * np.pi * np.arange(m + 1) / (m + 1))
    nodes = r[..., None] * omega                                # (..., m+1)
    dets = np.linalg.det(D[..., None, :, :]
                         - nodes[..., :, None, None] * E[..., None, :, :])
    scaled = np.fft.fft(dets, axis=-1) / (m + 1)                # p_j r^j
    coeffs = scaled / r[..., None] ** np.arange(m + 1)
    bound = (nd + r * ne) ** m
    regular = np.abs(dets).max(axis=-1) > PIVOT_TOL * bound
    coeffs = np.where(regular[..., None], coeffs, 0.0)
    return coeffs, regular


def relative_charpoly(D, E):
    """Coefficients of ``det(D - lambda E)`` in ascending powers."""
    D, E = as_square(D, "D"), as_square(E, "E")
    coeffs, _ = _charpoly_batch(*_stack(D, E))
    return RelCharPoly(coeffs)


def _roots_by_degree(coeffs, regular):
    """Homogeneous roots for each row of a coefficient table ``(n, m+1)``."""
    n, m1 = coeffs.shape
    m = m1 - 1
    pairs = np.full((n, m, 2), np.nan, dtype=complex)
    mag = np.abs(coeffs)
    top = mag.max(axis=1)
    above = mag > DEGREE_TOL * top[:, None]
    degree = np.where(regular, m - np.argmax(above[:, ::-1], axis=1), -1)
    for d in np.unique(degree):
        if d < 0:
            continue
        rows = np.nonzero(degree == d)[0]
        if d > 0:
            c = coeffs[rows, :d] / coeffs[rows, d:d + 1]
            comp = np.zeros((len(rows), d, d), dtype=complex)
            comp[:, np.arange(1, d), np.arange(d - 1)] = 1.0
            comp[:, :, -1] = -c
            lam = cluster_mean(np.linalg.eigvals(comp), scale=d)
            nrm = np.sqrt(1.0 + np.abs(lam) ** 2)
            pairs[rows, :d, 0] = lam / nrm
            pairs[rows, :d, 1] = 1.0 / nrm
        pairs[rows, d:, 0] = 1.0
        pairs[rows, d:, 1] = 0.0
    return pairs, degree


def pencil_spectra(D, E):
    """Vectorised :func:`pencil_spectrum` over stacks ``(n, m, m)``.

    Returns ``(pairs, regular)`` with ``pairs`` of shape ``(n, m, 2)``
    (NaN rows for singular pencils).
    """
    D, E = _stack(D, E)
    coeffs, regular = _charpoly_batch(D, E)
    pairs, _ = _roots_by_degree(coeffs.reshape(-1, D.shape[-1] + 1),
                                regular.reshape(-1))
    return pairs, regular.reshape(-1)


def pencil_spectrum(D, E):
    """Generalised eigenvalues of ``D - lambda E`` as homogeneous pairs.

    Finite eigenvalues are the roots of the relative characteristic
    polynomial; ``m - degree`` infinite eigenvalues are appended.
    """
    D, E = as_square(D, "D"), as_square(E, "E")
    pairs, regular = pencil_spectra(D[None], E[None])
    if not regular[0]:
        return PencilSpectrum(np.empty((0, 2), dtype=complex), False)
    return PencilSpectrum(pairs[0], True)


def _shift_candidates(count):
    seq = [0, 1, -1, 2, -2, 1j, -1j]
    n = 3
    while len(seq) < count:
        seq += [n, -n, (n - 1) * 1j, -(n - 1) * 1j]
        n += 1
    return seq[:count]


def resolvent_shift(A, B):
    """Pick ``gamma`` with ``A + gamma B`` invertible and return its inverse.

    Candidates ``0, 1, -1, 2, -2, i, -i, 3, ...`` (at most ``2m + 4``) are
    ranked by 2-norm condition number; ties keep the earlier candidate.

    Returns
    -------
    gamma : complex
    Z : ndarray
        ``(A + gamma B)^{-1}``, for which ``A Z B = B Z A``.
    """
    A, B = as_square(A, "A"), as_square(B, "B")
    if A.shape != B.shape:
        raise DimensionMismatch("A and B must have the same size")
    m = A.shape[0]
    best = None
    for gamma in _shift_candidates(2 * m + 4):
        s = np.linalg.svd(A + gamma * B, compute_uv=False)
        if s[-1] <= PIVOT_TOL * s[0] or s[0] == 0:
            continue
        cond = s[0] / s[-1]
        if best is None or cond < best[1] * (1 - 1e-8):
            best = (gamma, cond)
    if best is None:
        raise SingularPencil("no shift makes A + gamma*B invertible")
    gamma = complex(best[0])
    return gamma, np.linalg.inv(A + gamma * B)


@dataclass
class LaurentExpansion:
    """Laurent coefficients of ``(D - lambda E)^{-1}`` at infinity."""

    mu: int
    coeffs: dict = field(repr=False)
    kmax: int
    radius: float
    residual: float
    nodes: int

    @property
    def m(self):
        return next(iter(self.coeffs.values())).shape[0]

    def U(self, k):
        if k > self.kmax:
            raise MissingCoefficient(f"U_{k} not computed (kmax={self.kmax})")
        if k < -self.mu:
            return np.zeros((self.m, self.m), dtype=complex)
        return self.coeffs[k]

    def __getitem__(self, k):
        return self.U(k)


def _recurrence_residual(D, E, U, kmin, R, mres):
    """Largest violation of the coefficient recurrence, each index scaled by
    the Cauchy bound ``(|D| + R|E|) R^{k+1} max|res|`` of its terms."""
    m = D.shape[0]
    nd, ne = np.linalg.norm(D), np.linalg.norm(E)
    zero = np.zeros((m, m), dtype=complex)
    eye = np.eye(m)
    worst = 0.0
    nk = U.shape[0]
    for i in range(-1, nk - 1):
        k = kmin + i
        uk = U[i] if i >= 0 else zero
        r = D @ uk - E @ U[i + 1]
        if k == -1:
            r = r - eye
        scale = (nd + R * ne) * R ** (k + 1) * mres
        worst = max(worst, np.linalg.norm(r) / scale)
    return worst


def laurent_coefficients(D, E, kmax=None, tol=LAURENT_TOL, nodes=128,
                         max_nodes=4096):
    """Laurent coefficients ``U_k``, ``-m <= k <= kmax``, by contour quadrature.

    ``U_k = (1/2 pi i) \\oint lambda^k (D - lambda E)^{-1} d lambda`` on
    ``|lambda| = R`` with ``R = 2 (1 + max finite |eigenvalue|)``. The node
    count doubles from `nodes` up to `max_nodes` until the scaled recurrence
    residual drops below `tol`.

    Raises
    ------
    SingularPencil
    QuadratureNotConverged
    """
    D, E = as_square(D, "D"), as_square(E, "E")
    D, E = _stack(D, E)
    m = D.shape[0]
    kmax = m if kmax is None else int(kmax)
    spectrum = pencil_spectrum(D, E)
    if not spectrum.regular:
        raise SingularPencil("pencil D - lambda E is singular")
    fin = spectrum.finite()
    rho = float(np.abs(fin).max()) if fin.size else 0.0
    R = 2.0 * (1.0 + rho)
    ks = np.arange(-m, kmax + 1)
    eye = np.eye(m)
    n = nodes
    while True:
        w = R * np.exp(2j * np.pi * np.arange(n) / n)
        res = np.linalg.solve(D[None] - w[:, None, None] * E[None],
                              np.broadcast_to(eye, (n, m, m)))
        mres = np.linalg.norm(res, axis=(1, 2)).max()
        # lambda^{k+1} = R^{k+1} omega^{n(k+1)}
        phase = np.exp(2j * np.pi * np.outer(ks + 1, np.arange(n)) / n)
        U = np.einsum("kn,nij->kij", phase, res) / n
        U *= (R ** (ks + 1.0))[:, None, None]
        poly = np.linalg.norm(U[: m + 1], axis=(1, 2))     # k = -m .. 0
        cut = 1e-9 * poly.max()
        nonzero = [j for j in range(1, m + 1) if poly[m - j] > cut]
        mu = max(nonzero) if nonzero else 0
        U[: m - mu] = 0.0
        residual = _recurrence_residual(D, E, U, -m, R, mres)
        if residual < tol:
            break
        if 2 * n > max_nodes:
            raise QuadratureNotConverged(
                f"recurrence residual {residual:.2e} with {n} nodes")
        n *= 2
    coeffs = {int(k): U[i] for i, k in enumerate(ks)}
    return LaurentExpansion(mu=mu, coeffs=coeffs, kmax=kmax, radius=R,
                            residual=float(residual), nodes=n)


def rel_cayley_hamilton(p, L, k):
    """``ch_{D,E}(U_k) = sum_j p_j U_{k+j-m}``."""
    coeffs = p.coeffs if isinstance(p, RelCharPoly) else np.asarray(p)
    m = len(coeffs) - 1
    out = np.zeros((L.m, L.m), dtype=complex)
    for j, pj in enumerate(coeffs):
        idx = k + j - m
        if idx < -m:
            continue
        out += pj * L.U(idx)
    return out


def t_sequence(U, V, C, f, jmax):
    """Right-hand sides ``T_0 .. T_jmax`` from matching powers of lambda.

    ``T_j = sum_{s+t=j-1} U_s C V_t - sum_{s+t=j} U_s f(C) V_t`` with
    ``s >= -mu_U`` and ``t >= -mu_V``.
    """
    C = as_square(C, "C")
    fC = apply(f, C)
    out = []
    for j in range(jmax + 1):
        t_j = np.zeros_like(C)
        for shift, mid, sign in ((j - 1, C, 1.0), (j, fC, -1.0)):
            for s in range(-U.mu, shift + V.mu + 1):
                t = shift - s
                t_j = t_j + sign * (U.U(s) @ mid @ V.U(t))
        out.append(t_j)
    return out
