"""Laurent coefficients of a pencil resolvent at infinity.

(D - l E)^{-1} = sum_k U_k l^{-k-1}. Negative indices appear when E is
singular; their count is the index mu of the infinite eigenvalues.
"""

import numpy as np

from sylvlike import laurent_coefficients, rel_cayley_hamilton, relative_charpoly

rng = np.random.default_rng(0)

print("D=2, E=3: U_k = -(2/3)^k / 3")
L = laurent_coefficients([[2.0]], [[3.0]], kmax=4)
for k in range(5):
    print(f"  U_{k} = {L.U(k)[0, 0].real:+.10f}   expected {-(2 / 3) ** k / 3:+.10f}")

print("\nnilpotent E of index 3: mu counts the polynomial part")
D = np.eye(3)
E = np.eye(3, k=1)
L = laurent_coefficients(D, E, kmax=3)
print(f"  mu = {L.mu}, quadrature nodes {L.nodes}, recurrence residual {L.residual:.1e}")
for k in range(-L.mu, 1):
    print(f"  U_{k} =\n{np.round(L.U(k).real, 10)}")

print("\nrelative Cayley-Hamilton on a random 4x4 pencil with singular E")
D = rng.standard_normal((4, 4))
E = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 4))
L = laurent_coefficients(D, E, kmax=6)
p = relative_charpoly(D, E)
print(f"  degree {p.degree()}, mu {L.mu}")
for k in range(-1, 7):
    print(f"  k={k:+d}  |ch(U_k)| = {np.linalg.norm(rel_cayley_hamilton(p, L, k)):.2e}")
print("  vanishing is guaranteed for k >= m and k <= -1; in between it depends on the pencil")
