# -*- coding: utf-8 -*-
"""
@description: discrete optimality system of the tracking problem with energy type regularization
"""
from ocpfem.assembly import build_regularization_field
from ocpfem.ocp.baseline import solve_l2_regularization_baseline
from ocpfem.ocp.problem import (DiscreteSystem, OcpProblem, build_problem, build_system, energy_norm_operator,
                                l2_projection, schur_operator)
from ocpfem.ocp.solvers import (SCHUR_METHODS, SOLVER_NAMES, OcpSolution, SolverSettings, block_residuals, bp_scaling,
                                cost_functional, lowest_eigenvalue_estimate, recover_control, solve, solve_coupled_bpcg,
                                solve_coupled_gmres, solve_all, solve_direct, solve_schur)
