"""Four ways to solve the same equation, cross-checked.

The vectorized system is the reference. The reductions turn the equation
into an ordinary Sylvester equation. The closed forms build X from
characteristic polynomials or Laurent coefficients.
"""

import numpy as np

from sylvlike import (Problem, StructuredOperator, closed_form_preserving,
                      closed_form_reversing, random_problem, reduce_preserving,
                      reduce_reversing, solve, solve_kron)

for kind in ("identity", "conjugate", "transpose", "conjugate_transpose",
             "perm_similarity", "perm_reversing"):
    p = random_problem(5, "condition_a", kind, seed=1)
    ref = solve_kron(p).X
    if p.f.reversing:
        routes = {"reduction": reduce_reversing(p), "closed form": closed_form_reversing(p)}
    else:
        routes = {"reduction": reduce_preserving(p),
                  "closed form chA": closed_form_preserving(p, "chA"),
                  "closed form chB": closed_form_preserving(p, "chB")}
    print(kind)
    for name, r in routes.items():
        gap = np.linalg.norm(r.X - ref) / np.linalg.norm(ref)
        print(f"  {name:16s} residual {r.residual:.1e}   distance to kron {gap:.1e}")

print("\nscalar 2x + 3x^T = 5 through the Laurent closed form")
rep, (U, V, p, Ts, M) = closed_form_reversing(
    Problem(A=[[2.0]], B=[[3.0]], C=[[5.0]], f=StructuredOperator("transpose")),
    return_parts=True)
print(f"  relative charpoly {np.round(p.coeffs.real, 12)}")
print(f"  U0={U.U(0)[0, 0].real:.6f} U1={U.U(1)[0, 0].real:.6f} "
      f"V0={V.U(0)[0, 0].real:.6f} V1={V.U(1)[0, 0].real:.6f}")
print(f"  M={M[0, 0].real:.6f}  X={rep.X[0, 0].real:.12f}")

print("\nautomatic selection on x + x = 1, where the condition fails")
r = solve(Problem(A=[[1.0]], B=[[1.0]], C=[[1.0]], f=StructuredOperator("identity")))
print(f"  method {r.method}, X={r.X[0, 0].real}")
