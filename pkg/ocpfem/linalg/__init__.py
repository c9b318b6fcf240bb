# -*- coding: utf-8 -*-
"""
@description: sparse factorization, linear operators and Krylov solvers
"""
from ocpfem.linalg.factorization import NotPositiveDefiniteError, SpdFactorization, cholesky_factor
from ocpfem.linalg.krylov import (SolverReport, bp_cg, bp_transformed_operator, bp_transformed_rhs, cg, gmres,
                                  lanczos_extreme_eigenvalues, lanczos_max_eigenvalue, pcg, set_log_period)
from ocpfem.linalg.operators import (INNER_MODES, InverseOperator, as_operator, block_diagonal_operator,
                                     block_operator, check_linearity, diagonal_inverse, identity_operator,
                                     is_symmetric, scaled_operator, schur_complement_operator)
