# -*- coding: utf-8 -*-
"""
@description: solution paths for the discrete optimality system

All paths solve the coupled system

    [ K_rho   K ] [p]   [0]
    [ -K      M ] [u] = [f]

either reduced to the Schur complement (M + K K_rho^{-1} K) u = f, by GMRES on
the block system, by Bramble-Pasciak CG on its symmetric form, or by a
sparse direct solve.
"""
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ocpfem.assembly import element_l2_errors_sq
from ocpfem.linalg import (SolverReport, as_operator, block_diagonal_operator, block_operator, bp_cg,
                           cholesky_factor, cg, diagonal_inverse, gmres, lanczos_extreme_eigenvalues, pcg,
                           scaled_operator)
from ocpfem.ocp.problem import DiscreteSystem, energy_norm_operator, schur_operator
from ocpfem.utils.logger import logger

SCHUR_METHODS = ('cg', 'pcg_lump', 'pcg_diag')

# relative block residuals below this count as converged whatever the tol
BLOCK_RESIDUAL_FLOOR = 1e-11
# C = BP_SAFETY * lambda_min(B K_rho) B^{-1} for an approximate inverse B
BP_SAFETY = 0.9
# halvings of delta after a loss of positivity
BP_RETRIES = 3
# CG on B with K_rho as preconditioner when B^{-1} is needed
APPROX_INVERSE_TOL = 1e-10


@dataclass
class OcpSolution:
    u: np.ndarray
    p: np.ndarray
    report: SolverReport
    method: str
    revision: str
    z: Optional[np.ndarray] = None
    block_residuals: Tuple[float, float] = (0.0, 0.0)

    @property
    def converged(self):
        return self.report.converged


def block_residuals(system: DiscreteSystem, u, p):
    """
    Relative residuals of K_rho p + K u = 0 and -K p + M u = f.

    The first is scaled by ||K_rho p|| + ||K u||, the second by ||f||.
    """
    k_rho_p = system.weighted_stiffness @ p
    k_u = system.stiffness @ u
    first = np.linalg.norm(k_rho_p + k_u)
    second = np.linalg.norm(system.mass @ u - system.stiffness @ p - system.load)
    scale1 = np.linalg.norm(k_rho_p) + np.linalg.norm(k_u)
    scale2 = np.linalg.norm(system.load)
    rel1 = first / scale1 if scale1 > 0.0 else first
    rel2 = second / scale2 if scale2 > 0.0 else second
    return float(rel1), float(rel2)


def _block_tolerance(tol):
    return max(tol, BLOCK_RESIDUAL_FLOOR)


def _finish(system, u, p, report, method):
    report.inner = system.inner_mode
    residuals = block_residuals(system, u, p)
    if report.converged and max(residuals) > 10.0 * _block_tolerance(report.tol):
        report.converged = False
        logger.warning("{}: block residuals {:.2e}, {:.2e} above 10 * tol on {}".format(
            method, residuals[0], residuals[1], system.revision))
    return OcpSolution(u=u, p=p, report=report, method=method, revision=system.revision, block_residuals=residuals)


def _recover_adjoint(system, u):
    return -system.k_rho_inverse.matvec(system.stiffness @ u)


def _block_check(system, tol, split):
    """accept(x) for the Krylov loops: both block residuals of split(x) = (u, p) within tol."""
    limit = _block_tolerance(tol)

    def accept(x):
        u, p = split(x)
        return max(block_residuals(system, u, p)) <= limit

    return accept


def solve_schur(system: DiscreteSystem, method='pcg_lump', tol=1e-6, maxit=None) -> OcpSolution:
    """
    CG or PCG on the Schur complement equation, p recovered from the first
    block row. method: 'cg', 'pcg_lump' (lump[M_h]) or 'pcg_diag' (diag[M_h]).
    """
    if method not in SCHUR_METHODS:
        raise ValueError("unknown Schur method {!r}, expected one of {}".format(method, SCHUR_METHODS))
    inner_before = system.k_rho_inverse.inner_iterations
    operator = schur_operator(system)
    accept = _block_check(system, tol, lambda u: (u, _recover_adjoint(system, u)))
    if method == 'cg':
        u, report = cg(operator, system.load, tol=tol, maxit=maxit, accept=accept)
    else:
        diagonal = system.lumped_mass if method == 'pcg_lump' else system.diagonal_mass
        u, report = pcg(operator, system.load, M=diagonal_inverse(diagonal), tol=tol, maxit=maxit, accept=accept)
    p = _recover_adjoint(system, u)
    report.inner_iterations = system.k_rho_inverse.inner_iterations - inner_before
    return _finish(system, u, p, report, method)


def solve_coupled_gmres(system: DiscreteSystem, tol=1e-6, maxit=None, stagnation=50,
                        approx_inverse=None) -> OcpSolution:
    """
    GMRES on [[K_rho, K], [-K, M]] with the block diagonal preconditioner
    diag(K_rho^{-1}, lump[M]^{-1}); `approx_inverse` replaces the first block.
    """
    n = system.num_dofs
    operator = block_operator(system.weighted_stiffness, system.stiffness, -system.stiffness, system.mass)
    first = system.k_rho_inverse if approx_inverse is None else as_operator(approx_inverse)
    precond = block_diagonal_operator(first, diagonal_inverse(system.lumped_mass))
    inner_before = system.k_rho_inverse.inner_iterations
    accept = _block_check(system, tol, lambda x: (x[n:], x[:n]))
    x, report = gmres(operator, system.coupled_rhs(), M=precond, tol=tol, maxit=maxit, stagnation=stagnation,
                      accept=accept)
    report.inner_iterations = system.k_rho_inverse.inner_iterations - inner_before
    return _finish(system, x[n:], x[:n], report, 'gmres')


def lowest_eigenvalue_estimate(system: DiscreteSystem, approx_inverse, lanczos_steps=20, seed=0):
    """
    lambda_min(B K_rho) as 1 / lambda_max(K_rho^{-1} B^{-1}).

    The largest eigenvalue of the inverse pair is well separated, so a
    short Lanczos run resolves it. B^{-1} is applied by CG on B with
    K_rho as preconditioner.
    """
    approx_inverse = as_operator(approx_inverse)
    k_rho = system.weighted_stiffness

    def solve_b(x):
        y, _ = pcg(approx_inverse, x, M=k_rho, tol=APPROX_INVERSE_TOL, name='approx_inverse')
        return y

    b_inverse = spla.LinearOperator(k_rho.shape, matvec=solve_b, dtype=float)
    _, top = lanczos_extreme_eigenvalues(b_inverse, system.k_rho_inverse, steps=lanczos_steps, seed=seed)
    return 1.0 / top


def bp_scaling(system: DiscreteSystem, delta=0.5, approx_inverse=None, lanczos_steps=20, seed=0, lowest=None,
               safety=BP_SAFETY):
    """
    (C^{-1}, (K_rho - C)^{-1}, delta) for the Bramble-Pasciak transform.

    With the exact inverse C = delta K_rho, 0 < delta < 1. With an
    approximate inverse B, C = delta B^{-1} with delta = safety * lambda_min(B K_rho),
    the eigenvalue taken from `lowest` or estimated.
    """
    if approx_inverse is None:
        if not 0.0 < delta < 1.0:
            raise ValueError("delta must lie in (0, 1), got {}".format(delta))
        inverse = system.k_rho_inverse
        return scaled_operator(inverse, 1.0 / delta), scaled_operator(inverse, 1.0 / (1.0 - delta)), delta
    if not 0.0 < safety < 1.0:
        raise ValueError("safety factor must lie in (0, 1), got {}".format(safety))
    approx_inverse = as_operator(approx_inverse)
    if lowest is None:
        lowest = lowest_eigenvalue_estimate(system, approx_inverse, lanczos_steps, seed)
    delta = safety * lowest
    logger.debug("bp scaling: lambda_min estimate {:.3e}, delta {:.3e}".format(lowest, delta))
    return (scaled_operator(approx_inverse, 1.0 / delta), scaled_operator(approx_inverse, 1.0 / (lowest - delta)),
            delta)


def solve_coupled_bpcg(system: DiscreteSystem, delta=0.5, tol=1e-6, maxit=None, approx_inverse=None,
                       lanczos_steps=20, seed=0) -> OcpSolution:
    """
    Bramble-Pasciak CG on [[K_rho, K], [K, -M]] [p; u] = [0; -f].

    With an approximate inverse, a loss of positivity halves delta and
    restarts, at most BP_RETRIES times.
    """
    n = system.num_dofs
    rhs = np.concatenate([np.zeros(n), -system.load])
    blocks = (system.weighted_stiffness, system.stiffness, system.mass)
    accept = _block_check(system, tol, lambda x: (x[n:], x[:n]))
    lowest = None
    if approx_inverse is not None:
        lowest = lowest_eigenvalue_estimate(system, approx_inverse, lanczos_steps, seed)
    inner_before = system.k_rho_inverse.inner_iterations
    safety = BP_SAFETY
    iterations = 0
    for _ in range(BP_RETRIES + 1):
        c_inverse, first, delta = bp_scaling(system, delta, approx_inverse, lowest=lowest, safety=safety)
        x, report = bp_cg(blocks, c_inverse, first, diagonal_inverse(system.lumped_mass), rhs, tol=tol, maxit=maxit,
                          accept=accept)
        iterations += report.iterations
        if not report.breakdown:
            break
        logger.warning("bp_cg lost positivity with delta {:.3e}".format(delta))
        if approx_inverse is None:
            break
        safety *= 0.5
    report.iterations = iterations
    report.inner_iterations = system.k_rho_inverse.inner_iterations - inner_before
    return _finish(system, x[n:], x[:n], report, 'bpcg')


def solve_direct(system: DiscreteSystem) -> OcpSolution:
    """Sparse direct solve of the coupled system."""
    start = time.perf_counter()
    n = system.num_dofs
    x = spla.spsolve(sp.csc_matrix(system.coupled_matrix()), system.coupled_rhs())
    report = SolverReport(solver='direct', dofs=n, iterations=0, tol=1e-8)
    report.seconds = time.perf_counter() - start
    solution = _finish(system, x[n:], x[:n], report, 'direct')
    report.residual = max(solution.block_residuals)
    report.verified_residual = report.residual
    report.converged = bool(np.all(np.isfinite(x))) and report.residual <= report.tol
    if not report.converged:
        logger.warning("direct solve on {} left residual {:.3e}".format(system.revision, report.residual))
    return solution


def solve(system: DiscreteSystem, name, tol=1e-6, maxit=None, stagnation=50, delta=0.5, lanczos_steps=20,
          approx_inverse=None, seed=0) -> OcpSolution:
    """Dispatch by solver name: cg, pcg, pcg_diag, gmres, bpcg or direct."""
    if name == 'cg':
        return solve_schur(system, 'cg', tol=tol, maxit=maxit)
    if name == 'pcg':
        return solve_schur(system, 'pcg_lump', tol=tol, maxit=maxit)
    if name == 'pcg_diag':
        return solve_schur(system, 'pcg_diag', tol=tol, maxit=maxit)
    if name == 'gmres':
        return solve_coupled_gmres(system, tol=tol, maxit=maxit, stagnation=stagnation, approx_inverse=approx_inverse)
    if name == 'bpcg':
        return solve_coupled_bpcg(system, delta=delta, tol=tol, maxit=maxit, approx_inverse=approx_inverse,
                                  lanczos_steps=lanczos_steps, seed=seed)
    if name == 'direct':
        return solve_direct(system)
    raise NotImplementedError("solver {} not implemented".format(name))


SOLVER_NAMES = ('cg', 'pcg', 'pcg_diag', 'gmres', 'bpcg', 'direct')


def recover_control(system: DiscreteSystem, solution: OcpSolution) -> np.ndarray:
    """Nodal control z with M_h z = K_h u."""
    z = cholesky_factor(system.mass).solve(system.stiffness @ solution.u)
    solution.z = z
    return z


def cost_functional(system: DiscreteSystem, solution: OcpSolution):
    """(tracking, regularization, total) of the discrete reduced cost."""
    problem = system.problem
    errors = element_l2_errors_sq(problem.mesh, problem.dofmap, solution.u, problem.target, problem.quadrature)
    tracking = 0.5 * float(errors.sum())
    regularization = 0.5 * float(np.dot(solution.u, energy_norm_operator(system).matvec(solution.u)))
    return tracking, regularization, tracking + regularization


@dataclass(frozen=True)
class SolverSettings:
    """Solver names to run per level and their shared parameters."""
    names: Tuple[str, ...] = ('pcg',)
    tol: float = 1e-6
    maxit: Optional[int] = None
    inner: str = 'cholesky'
    inner_tol: float = 1e-12
    delta: float = 0.5
    stagnation: int = 50
    lanczos_steps: int = 20
    seed: int = 0

    def __post_init__(self):
        if not self.names:
            raise ValueError("at least one solver name is needed")
        for name in self.names:
            if name not in SOLVER_NAMES:
                raise NotImplementedError("solver {} not implemented".format(name))

    @classmethod
    def from_config(cls, cfg):
        return cls(names=tuple(cfg.SOLVER.NAMES), tol=cfg.SOLVER.TOL, maxit=cfg.SOLVER.MAXIT or None,
                   inner=cfg.SOLVER.INNER, inner_tol=cfg.SOLVER.INNER_TOL, delta=cfg.SOLVER.BP_DELTA,
                   stagnation=cfg.SOLVER.GMRES_STAGNATION, lanczos_steps=cfg.SOLVER.LANCZOS_STEPS,
                   seed=cfg.EXPERIMENT.SEED)


def solve_all(system: DiscreteSystem, settings: SolverSettings):
    """Run every configured solver on one system, keyed by solver name."""
    return {name: solve(system, name, tol=settings.tol, maxit=settings.maxit, stagnation=settings.stagnation,
                        delta=settings.delta, lanczos_steps=settings.lanczos_steps, seed=settings.seed)
            for name in settings.names}
