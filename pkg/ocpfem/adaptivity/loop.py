# -*- coding: utf-8 -*-
"""
@description: adaptive and uniform refinement drivers

Each level: build the problem on the current mesh (rho recomputed from its
geometry), solve with every configured solver, compute indicators, record,
then mark and refine (or refine everything).
"""
import time
from typing import Callable, Optional

import numpy as np

from ocpfem.adaptivity.marking import MarkingRule, compute_indicators, mark
from ocpfem.adaptivity.records import RunRecord
from ocpfem.assembly.regularization import CONSTANT, VARIABLE_LOCAL
from ocpfem.mesh import SimplicialMesh, refine, uniform_refine
from ocpfem.ocp import (OcpProblem, SolverSettings, build_problem, build_system, solve_all,
                        solve_l2_regularization_baseline)
from ocpfem.utils.logger import logger

DIFFUSION = 'diffusion'
ENERGY = 'energy'
L2 = 'l2'
REGULARIZATIONS = (DIFFUSION, ENERGY, L2)

# levels after which the loop gives up, per dimension
DEFAULT_MAX_LEVELS = {1: 60, 2: 14, 3: 10}

LevelCallback = Callable[[int, OcpProblem, object, object], None]


def _log_record(record: RunRecord):
    its = ' '.join('{}={}'.format(k, getattr(record, k)) for k in ('its_pcg', 'its_cg', 'its_gmres', 'its_bpcg')
                   if getattr(record, k) >= 0)
    logger.info("level {:3d} N={} dofs={} h=[{:.3e}, {:.3e}] error={:.5e} {}".format(
        record.level, record.N, record.dofs, record.h_min, record.h_max, record.error, its))


def _solve_level(problem: OcpProblem, settings: SolverSettings, level, regularization):
    """Solutions of all solvers on one problem, the first one drives the indicators."""
    start = time.perf_counter()
    system = build_system(problem, inner=settings.inner, inner_tol=settings.inner_tol)
    solutions = solve_all(system, settings)
    primary = solutions[settings.names[0]]
    eta = compute_indicators(problem, primary)
    mesh = problem.mesh
    record = RunRecord(level=level, N=mesh.num_elements, dofs=problem.num_dofs, h_min=mesh.h_min, h_max=mesh.h_max,
                       error=float(np.sqrt(np.sum(eta ** 2))), vertices=mesh.vertex_count,
                       converged=all(s.converged for s in solutions.values()), regularization=regularization)
    for name, solution in solutions.items():
        record.set_iterations(name, solution.report.iterations)
        record.reports.append(dict(solution.report.to_row(), method=name))
    record.seconds = time.perf_counter() - start
    return system, primary, eta, record


def _over_budget(mesh: SimplicialMesh, dof_budget):
    if dof_budget and mesh.interior_vertex_count > dof_budget:
        logger.warning("next level has {} dofs, above the budget of {}; stopping".format(
            mesh.interior_vertex_count, dof_budget))
        return True
    return False


def adaptive_solve(problem: OcpProblem, rule: MarkingRule = MarkingRule(), max_levels=None,
                   settings: SolverSettings = SolverSettings(), dof_budget=None, abort_on_failure=True,
                   callback: Optional[LevelCallback] = None, bisections=None):
    """
    solve -> indicate -> mark -> refine, for levels 0..max_levels.

    Marked elements are bisected `bisections` times per level, by default
    once per space dimension so that their h_l halves. Stops early when
    nothing is marked, when the next mesh exceeds `dof_budget` or, with
    `abort_on_failure`, after a level whose solver did not converge.
    Returns one RunRecord per solved level.
    """
    if max_levels is None:
        max_levels = DEFAULT_MAX_LEVELS[problem.mesh.dim]
    if max_levels < 0:
        raise ValueError("max_levels must be >= 0")
    if bisections is None:
        bisections = problem.mesh.dim
    mode, parameter = problem.rho.mode, problem.rho.parameter
    records = []
    for level in range(max_levels + 1):
        system, solution, eta, record = _solve_level(problem, settings, level, DIFFUSION)
        if callback is not None:
            callback(level, problem, system, solution)
        records.append(record)
        if not record.converged and abort_on_failure:
            logger.warning("solver failure on level {}, stopping with {} records".format(level, len(records)))
            break
        if level == max_levels:
            _log_record(record)
            break
        marked = mark(eta, rule)
        record.marked = int(marked.size)
        _log_record(record)
        if marked.size == 0:
            logger.info("no element marked, error is zero up to quadrature")
            break
        mesh = refine(problem.mesh, marked, bisections)
        if _over_budget(mesh, dof_budget):
            break
        problem = build_problem(mesh, problem.target, mode, parameter, problem.quadrature)
    return records


def _uniform_level_problem(problem: OcpProblem, mesh: SimplicialMesh, regularization):
    if regularization == DIFFUSION:
        return build_problem(mesh, problem.target, VARIABLE_LOCAL, quadrature=problem.quadrature)
    # constant rho from the current global mesh size
    return build_problem(mesh, problem.target, CONSTANT, mesh.h_max ** 2, problem.quadrature)


def _solve_l2_level(problem: OcpProblem, settings: SolverSettings, level):
    start = time.perf_counter()
    mesh = problem.mesh
    method = 'gmres' if 'gmres' in settings.names else 'direct'
    solution = solve_l2_regularization_baseline(mesh, problem.dofmap, problem.target, mesh.h_max ** 4,
                                                method=method, tol=settings.tol, maxit=settings.maxit,
                                                quadrature=problem.quadrature)
    eta = compute_indicators(problem, solution)
    record = RunRecord(level=level, N=mesh.num_elements, dofs=problem.num_dofs, h_min=mesh.h_min, h_max=mesh.h_max,
                       error=float(np.sqrt(np.sum(eta ** 2))), vertices=mesh.vertex_count,
                       converged=solution.converged, regularization=L2)
    record.set_iterations(solution.report.solver, solution.report.iterations)
    record.reports.append(dict(solution.report.to_row(), method=solution.method))
    record.seconds = time.perf_counter() - start
    return solution, record


def uniform_solve(problem: OcpProblem, max_levels=None, settings: SolverSettings = SolverSettings(),
                  regularization=ENERGY, dof_budget=None, abort_on_failure=True,
                  callback: Optional[LevelCallback] = None):
    """
    Uniform refinement baseline.

    regularization: 'energy' (rho = h^2), 'l2' (L2 regularization with
    rho = h^4) or 'diffusion' (rho_l = h_l^2), h the largest element size
    of the current mesh.
    """
    if regularization not in REGULARIZATIONS:
        raise ValueError("unknown regularization {!r}, expected one of {}".format(regularization, REGULARIZATIONS))
    if max_levels is None:
        max_levels = DEFAULT_MAX_LEVELS[problem.mesh.dim]
    if max_levels < 0:
        raise ValueError("max_levels must be >= 0")
    mesh = problem.mesh
    records = []
    for level in range(max_levels + 1):
        if regularization == L2:
            level_problem = build_problem(mesh, problem.target, CONSTANT, mesh.h_max ** 4, problem.quadrature)
            solution, record = _solve_l2_level(level_problem, settings, level)
            system = None
        else:
            level_problem = _uniform_level_problem(problem, mesh, regularization)
            system, solution, _, record = _solve_level(level_problem, settings, level, regularization)
        if callback is not None:
            callback(level, level_problem, system, solution)
        record.marked = mesh.num_elements if level < max_levels else 0
        records.append(record)
        _log_record(record)
        if not record.converged and abort_on_failure:
            logger.warning("solver failure on level {}, stopping with {} records".format(level, len(records)))
            break
        if level == max_levels:
            break
        mesh = uniform_refine(mesh)
        if _over_budget(mesh, dof_budget):
            break
    return records


def initial_problem(mesh: SimplicialMesh, target, regularization=DIFFUSION, quadrature=None) -> OcpProblem:
    """Level-0 problem for a driver; constant modes take rho from h_max."""
    if regularization == DIFFUSION:
        return build_problem(mesh, target, VARIABLE_LOCAL, quadrature=quadrature)
    if regularization == ENERGY:
        return build_problem(mesh, target, CONSTANT, mesh.h_max ** 2, quadrature)
    if regularization == L2:
        return build_problem(mesh, target, CONSTANT, mesh.h_max ** 4, quadrature)
    raise ValueError("unknown regularization {!r}, expected one of {}".format(regularization, REGULARIZATIONS))

