"""When is A X + f(X) B = C uniquely solvable?

The vectorized map decides it exactly. The spectral conditions are cheaper
and only sufficient, and the scalar equation x + x = c shows the gap.
"""

import numpy as np

from sylvlike import (StructuredOperator, check_preserving, check_reversing,
                      kron_nonsingular, random_problem)

I = StructuredOperator("identity")
T = StructuredOperator("transpose")

print("scalar 2x + 3x = c")
print("  spectral condition:", check_preserving([[2]], [[3]], I).holds)
print("  vectorized map nonsingular:", kron_nonsingular([[2]], [[3]], f=I)[0])

print("\nscalar x + x = c  (unique solution c/2)")
r = check_preserving([[1]], [[1]], I)
print(f"  spectral condition holds: {r.holds}, margin {r.margin:.2g}")
print(f"  vectorized map nonsingular: {r.kron_nonsingular}, sigma_min {r.sigma_min:.3g}")

print("\nscalar 2x + 3x^T = c  (reversing operator)")
r = check_reversing([[2]], [[3]], T)
print(f"  pencils 2 - l*3 and 3 - l*2 have eigenvalues 2/3 and 3/2; "
      f"chordal margin {r.margin:.4f}")

print("\nrandom 4x4 instances, transpose")
for kind in ("condition_b", "generic", "singular"):
    p = random_problem(4, kind, T, seed=3)
    r = check_reversing(p.A, p.B, T)
    print(f"  {kind:12s} holds={r.holds!s:5s} kron_nonsingular={r.kron_nonsingular!s:5s} "
          f"sigma_min={r.sigma_min:.2e}")

print("\nsoundness spot check over 300 random instances")
bad = 0
for seed in range(300):
    p = random_problem(1 + seed % 5, "generic", "conjugate_transpose", seed=seed)
    r = check_reversing(p.A, p.B, p.f)
    bad += r.holds and not r.kron_nonsingular
print(f"  condition held on a singular map {bad} times")
