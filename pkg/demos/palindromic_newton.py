"""Palindromic quadratic eigenproblems through a Riccati equation.

Q(l) = l^2 A0 + l A1 + A2 with f(A2) = A0 and f(A1) = A1 has eigenvalues in
pairs (l, 1/s(l)). A solvent X of the associated Riccati equation splits
the spectrum into two halves, and Newton's method finds it.
"""

import numpy as np

from sylvlike import (StructuredOperator, build_z, check_pairing, make_qep,
                      newton_riccati, qep_eigenvalues, qep_eigs_from_riccati,
                      random_qep, riccati_residual, riccati_root)

T = StructuredOperator("transpose")

print("scalar x^2 - 5/2 x + 1: roots 1/2 and 2")
q = make_qep([[1.0]], [[-2.5]], T)
b = build_z(q)
trace = newton_riccati(b, T, np.zeros((1, 1)), tol=1e-12)
for k, x in enumerate(trace.path):
    print(f"  step {k}: x = {x[0, 0].real:.16f}")
first, second = qep_eigs_from_riccati(b, trace.X, T)
print("  halves:", first[:, 0] / first[:, 1], second[:, 0] / second[:, 1])

print("\nrandom 3x3 conjugate-transpose palindromic quadratic")
q = random_qep(3, "conjugate_transpose", seed=4)
b = build_z(q)
X0 = riccati_root(q)
X0 = X0 + 1e-3 * np.random.default_rng(1).standard_normal(X0.shape)
trace = newton_riccati(b, q.f, X0, tol=1e-13)
for it in trace.to_dict()["iterates"]:
    print(f"  step {it['k']}: residual {it['residual']:.2e}")
print(f"  final |R(X)| = {np.linalg.norm(riccati_residual(trace.X, b, q.f)):.1e}")
first, second = qep_eigs_from_riccati(b, trace.X, q.f)
pairs = check_pairing(np.vstack([first, second]), q.f)
print(f"  s-reciprocal pairs found: {len(pairs.pairs)}, unmatched {len(pairs.unmatched)}")
ev = qep_eigenvalues(q)
print("  moduli:", np.round(np.sort(np.abs(ev[:, 0] / ev[:, 1])), 4))
