"""Shared oracles for the test modules."""

import numpy as np
from scipy.optimize import linear_sum_assignment

from sylvlike.pencil_lab import chordal_matrix, homogeneous


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


def multiset_chordal(p, q):
    """Largest chordal distance under the best one-to-one matching."""
    p = homogeneous(p) if np.asarray(p).ndim == 1 else np.asarray(p)
    q = homogeneous(q) if np.asarray(q).ndim == 1 else np.asarray(q)
    assert len(p) == len(q)
    d = chordal_matrix(p, q)
    r, c = linear_sum_assignment(d)
    return float(d[r, c].max()) if len(r) else 0.0
