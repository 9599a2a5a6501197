"""Structured period-2 operators ``f`` acting on square matrices.

The supported operators form a closed family::

    identity              X
    transpose             X^T
    conjugate             conj(X)
    conjugate_transpose   X^H
    perm_similarity(P)    P X P^T
    perm_reversing(P)     P X^T P^T

Each comes with a scalar companion ``s`` such that ``f(a X) = s(a) f(X)``
(conjugation for the two conjugating kinds, the identity otherwise).

Conjugating operators are only real-linear, so their vectorized form is a
real matrix of doubled size acting on ``[Re vec(X); Im vec(X)]``. The
:class:`RealLinearMap` container hides that distinction from callers.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange

__all__ = [
    "KINDS",
    "StructuredOperator",
    "OperatorClass",
    "RealLinearMap",
    "apply",
    "scalar_map",
    "classify",
    "commutation_matrix",
    "kf_matrix",
    "index_to_permutation",
    "permutation_matrix",
    "realify",
    "operator_to_json",
    "operator_from_json",
]

KINDS = ("identity", "transpose", "conjugate", "conjugate_transpose",
         "perm_similarity", "perm_reversing")
_PERM_KINDS = ("perm_similarity", "perm_reversing")
_REVERSING = ("transpose", "conjugate_transpose", "perm_reversing")
_CONJUGATING = ("conjugate", "conjugate_transpose")


@dataclass(frozen=True)
class OperatorClass:
    algebra: str                # "preserving" or "reversing"
    linear_over_complex: bool
    scalar_map_kind: str        # "identity" or "conjugation"


@dataclass(frozen=True)
class StructuredOperator:
    """An operator from the closed family above.

    `perm` is a 1-based permutation tuple, required for the perm kinds and
    ignored otherwise. Row ``j`` of the permutation matrix is
    ``e_{perm[j]}^T``.
    """

    kind: str
    perm: tuple = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind in _PERM_KINDS:
            if self.perm is None:
                raise ValueError(f"{self.kind} requires a permutation")
            perm = tuple(int(p) for p in self.perm)
            if sorted(perm) != list(range(1, len(perm) + 1)):
                raise ValueError(f"{perm} is not a permutation of 1..{len(perm)}")
            object.__setattr__(self, "perm", perm)
        else:
            object.__setattr__(self, "perm", None)

    @classmethod
    def from_index(cls, kind, k, m):
        """Perm kind built from the k-th (1-based, lexicographic) permutation."""
        perm, _ = index_to_permutation(k, m)
        return cls(kind, perm)

    @property
    def size(self):
        """Matrix size the operator is tied to (None for size-free kinds)."""
        return None if self.perm is None else len(self.perm)

    @property
    def reversing(self):
        return self.kind in _REVERSING

    @property
    def conjugating(self):
        return self.kind in _CONJUGATING

    @property
    def involutive(self):
        """True when ``f(f(X)) = X``; perm kinds need ``perm`` of order two."""
        if self.perm is None:
            return True
        idx = np.array(self.perm) - 1
        return bool(np.all(idx[idx] == np.arange(len(idx))))

    @property
    def P(self):
        return None if self.perm is None else permutation_matrix(self.perm)

    def __call__(self, x):
        return apply(self, x)

    def s(self, a):
        return scalar_map(self, a)

    def __str__(self):
        if self.perm is None:
            return self.kind
        return f"{self.kind}{list(self.perm)}"


def _check_size(f, x):
    x = np.asarray(x)
    if x.ndim < 2 or x.shape[-1] != x.shape[-2]:
        raise DimensionMismatch(f"operator needs square matrices, got {x.shape}")
    if f.perm is not None and x.shape[-1] != len(f.perm):
        raise DimensionMismatch(
            f"{f} acts on {len(f.perm)}x{len(f.perm)} matrices, got {x.shape}")
    return x


def apply(f, x):
    """Return ``f(x)``; stacks of matrices ``(..., m, m)`` are accepted."""
    x = _check_size(f, x)
    kind = f.kind
    if kind == "identity":
        return x.copy()
    if kind == "transpose":
        return np.swapaxes(x, -1, -2).copy()
    if kind == "conjugate":
        return np.conj(x)
    if kind == "conjugate_transpose":
        return np.conj(np.swapaxes(x, -1, -2))
    idx = np.array(f.perm) - 1
    if kind == "perm_reversing":
        x = np.swapaxes(x, -1, -2)
    # (P X P^T)_{ij} = X_{perm(i), perm(j)}
    return x[..., idx[:, None], idx[None, :]]


def scalar_map(f, a):
    """The scalar companion ``s(a)``."""
    return np.conj(a) if f.conjugating else a


def classify(f):
    return OperatorClass(
        algebra="reversing" if f.reversing else "preserving",
        linear_over_complex=not f.conjugating,
        scalar_map_kind="conjugation" if f.conjugating else "identity",
    )


def commutation_matrix(m):
    """The m^2 x m^2 permutation K with ``K vec(X) = vec(X^T)``."""
    if m < 1:
        raise ValueError("m must be positive")
    k = np.zeros((m * m, m * m))
    i, j = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    # X[i, j] sits at j*m + i in vec(X) and at i*m + j in vec(X^T)
    k[(i * m + j).ravel(), (j * m + i).ravel()] = 1.0
    return k


def permutation_matrix(perm):
    perm = np.asarray(perm) - 1
    p = np.zeros((len(perm), len(perm)))
    p[np.arange(len(perm)), perm] = 1.0
    return p


def index_to_permutation(k, m):
    """The k-th permutation of 1..m in lexicographic order, and its matrix.

    >>> index_to_permutation(7, 4)[0]
    (2, 1, 3, 4)
    """
    if m < 1 or not 1 <= k <= factorial(m):
        raise IndexOutOfRange(f"k={k} outside 1..{m}! for m={m}")
    rest = list(range(1, m + 1))
    r = k - 1
    perm = []
    for pos in range(m, 0, -1):
        q, r = divmod(r, factorial(pos - 1))
        perm.append(rest.pop(q))
    perm = tuple(perm)
    return perm, permutation_matrix(perm)


def realify(a):
    """Real form of a complex-linear map: ``[[Re a, -Im a], [Im a, Re a]]``."""
    a = np.asarray(a, dtype=complex)
    return np.block([[a.real, -a.imag], [a.imag, a.real]])


@dataclass(frozen=True)
class RealLinearMap:
    """A linear map on C^n given either as a complex n x n matrix or, when
    the map is only real-linear, as a real 2n x 2n matrix acting on stacked
    real and imaginary parts."""

    matrix: np.ndarray
    realified: bool

    @property
    def n(self):
        return self.matrix.shape[-1] // (2 if self.realified else 1)

    def __call__(self, v):
        v = np.asarray(v, dtype=complex)
        if not self.realified:
            return self.matrix @ v
        w = self.matrix @ np.concatenate([v.real, v.imag])
        return w[: self.n] + 1j * w[self.n:]

    def singular_values(self):
        return np.linalg.svd(self.matrix, compute_uv=False)

    def solve(self, b):
        b = np.asarray(b, dtype=complex)
        if not self.realified:
            return np.linalg.solve(self.matrix, b)
        w = np.linalg.solve(self.matrix, np.concatenate([b.real, b.imag]))
        return w[: self.n] + 1j * w[self.n:]


def _kf_complex(f, m):
    if f.kind in ("identity", "conjugate"):
        return np.eye(m * m)
    if f.kind in ("transpose", "conjugate_transpose"):
        return commutation_matrix(m)
    p = permutation_matrix(f.perm)
    pp = np.kron(p, p)          # vec(P X P^T) = (P kron P) vec(X)
    if f.kind == "perm_reversing":
        return pp @ commutation_matrix(m)
    return pp


def kf_matrix(f, m):
    """Matrix representation of ``vec . f . vec^{-1}`` on m x m matrices."""
    if f.perm is not None and len(f.perm) != m:
        raise DimensionMismatch(f"{f} does not act on {m}x{m} matrices")
    k = _kf_complex(f, m)
    if not f.conjugating:
        return RealLinearMap(k.astype(complex), realified=False)
    z = np.zeros_like(k)
    return RealLinearMap(np.block([[k, z], [z, -k]]), realified=True)


def operator_to_json(f):
    out = {"kind": f.kind}
    if f.perm is not None:
        out["perm"] = list(f.perm)
    return out


def operator_from_json(obj, m=None):
    """Parse the operator schema; ``perm_index`` needs the matrix size `m`."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("operator must be an object with a 'kind'")
    kind = obj["kind"]
    if kind in _PERM_KINDS and "perm" not in obj:
        if "perm_index" not in obj or m is None:
            raise ValueError(f"{kind} needs 'perm' or 'perm_index'")
        return StructuredOperator.from_index(kind, int(obj["perm_index"]), m)
    return StructuredOperator(kind, obj.get("perm"))
