# -*- coding: utf-8 -*-
"""
@description: L2 regularized comparison problem

With z = -p / rho the optimality system reads

    K u + (1/rho) M p = 0
    K p - M u = -f
"""
import time

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ocpfem.assembly import (DofMap, QuadratureSpec, TargetFunction, assemble_load, assemble_mass,
                             assemble_stiffness, lump_mass)
from ocpfem.linalg import (InverseOperator, SolverReport, block_diagonal_operator, block_operator, diagonal_inverse,
                           gmres)
from ocpfem.mesh import SimplicialMesh
from ocpfem.ocp.solvers import OcpSolution
from ocpfem.utils.logger import logger
from ocpfem.utils.type_utils import is_pos_float

BASELINE_METHODS = ('direct', 'gmres')


def solve_l2_regularization_baseline(mesh: SimplicialMesh, dofmap: DofMap, target: TargetFunction, rho,
                                     method='direct', tol=1e-6, maxit=None,
                                     quadrature: QuadratureSpec = None) -> OcpSolution:
    """
    State and adjoint of the L2 regularized problem with constant rho.

    method 'direct' uses a sparse LU of the block matrix, 'gmres' the block
    diagonal preconditioner diag(K^{-1}, lump[M]^{-1}).
    """
    if not is_pos_float(rho):
        raise ValueError("L2 regularization needs rho > 0, got {!r}".format(rho))
    if method not in BASELINE_METHODS:
        raise ValueError("unknown baseline method {!r}, expected one of {}".format(method, BASELINE_METHODS))
    dofmap.require_dofs()
    start = time.perf_counter()
    k = assemble_stiffness(mesh, dofmap)
    m = assemble_mass(mesh, dofmap)
    f = assemble_load(mesh, dofmap, target, quadrature or QuadratureSpec())
    n = f.shape[0]
    rhs = np.concatenate([np.zeros(n), -f])
    if method == 'direct':
        matrix = sp.bmat([[k, m / rho], [-m, k]], format='csc')
        x = spla.spsolve(matrix, rhs)
        report = SolverReport(solver='direct', dofs=n, residual=0.0, converged=bool(np.all(np.isfinite(x))))
        if not report.converged:
            logger.warning("L2 baseline: singular block system on mesh {}".format(mesh.revision))
    else:
        operator = block_operator(k, m / rho, -m, k)
        precond = block_diagonal_operator(InverseOperator(k), diagonal_inverse(lump_mass(m)))
        x, report = gmres(operator, rhs, M=precond, tol=tol, maxit=maxit)
    report.seconds = time.perf_counter() - start
    u, p = x[:n], x[n:]
    first = np.linalg.norm(k @ u + m @ p / rho)
    second = np.linalg.norm(k @ p - m @ u + f)
    scale = np.linalg.norm(f)
    residuals = (float(first / scale), float(second / scale)) if scale > 0.0 else (float(first), float(second))
    return OcpSolution(u=u, p=p, report=report, method='l2_' + method, revision=mesh.revision, z=-p / rho,
                       block_residuals=residuals)
