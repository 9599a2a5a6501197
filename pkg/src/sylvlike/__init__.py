"""Sylvester-like matrix equations ``A X + f(X) B = C``.

``f`` ranges over a small family of structured operators
(identity, transpose, conjugate, conjugate transpose and two permutation
variants). The package provides solvability tests based on pencil spectra,
several solution routes cross-checked against the vectorized system, the
Laurent machinery behind the explicit solution formulas, and a Newton solver
for the Riccati equation attached to f-palindromic quadratic eigenproblems.
"""

from .errors import *  # noqa: F401,F403
from .matrix_core import (as_matrix, as_square, determinant, eigenvalues,
                          matrix_from_json, matrix_to_json, solve_linear,
                          unvec, vec)
from .structured_ops import (KINDS, RealLinearMap, StructuredOperator, apply,
                             classify, commutation_matrix,
                             index_to_permutation, kf_matrix,
                             operator_from_json, operator_to_json,
                             permutation_matrix, scalar_map)
from .pencil_lab import (LaurentExpansion, PencilSpectrum, RelCharPoly,
                         chordal, laurent_coefficients, pencil_spectrum,
                         rel_cayley_hamilton, relative_charpoly,
                         resolvent_shift, t_sequence)
from .solvability import (SolvabilityReport, assemble_p, check_generalized,
                          check_preserving, check_reversing, kron_nonsingular,
                          kron_operator, permutation_solvability,
                          reciprocal_free, triangular_kron_spectrum)
from .solvers import (Problem, SolveReport, analyze, closed_form_preserving,
                      closed_form_reversing, reduce_preserving,
                      reduce_reversing, relative_residual, solve, solve_kron)
from .palindromic import (NewtonTrace, PalindromicQEP, RiccatiBlocks,
                          big_f, build_z, check_pairing, make_qep,
                          newton_riccati, qep_det, qep_eigenvalues,
                          qep_eigs_from_riccati, riccati_residual,
                          riccati_root)
from .generate import random_problem, random_qep

__version__ = "0.1.0"
