"""Permutation operators and the triangular Kronecker spectrum.

For f(X) = P X P^T (or P X^T P^T) the vectorized map is a Kronecker sum with
a permutation. Its spectrum can be read off from diagonals when the data
are triangular, and the pencil test decides solvability exactly.
"""

import itertools

import numpy as np

from sylvlike import StructuredOperator, assemble_p, triangular_kron_spectrum
from sylvlike.solvability import permutation_verdicts

T = StructuredOperator("transpose")
out = triangular_kron_spectrum(np.diag([1.0, 2]), np.diag([3.0, 4]),
                               np.diag([5.0, 6]), np.diag([7.0, 8]), T)
print("diag example, transpose:", np.sort(out.real))
dense = np.linalg.eigvals(assemble_p(np.diag([1.0, 2]), np.diag([3.0, 4]),
                                     np.diag([5.0, 6]), np.diag([7.0, 8]), T))
print("dense eigenvalues:        ", np.sort(dense.real))

print("\nexhaustive 2x2 integer grid, entries in -2..2")
vals = np.arange(-2, 3)
ent = np.array(list(itertools.product(vals, repeat=4)), float).reshape(-1, 2, 2)
ia, ib = np.meshgrid(np.arange(len(ent)), np.arange(len(ent)), indexing="ij")
A, B = ent[ia.ravel()], ent[ib.ravel()]
for kind in ("perm_similarity", "perm_reversing"):
    for perm in ((1, 2), (2, 1)):
        holds, _, kron_ok, _ = permutation_verdicts(A, B, StructuredOperator(kind, perm))
        print(f"  {kind:15s} perm {perm}: {len(A)} pairs, "
              f"{int(kron_ok.sum())} solvable, {int((holds != kron_ok).sum())} disagreements")
