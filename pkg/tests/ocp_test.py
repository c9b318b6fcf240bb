# -*- coding: utf-8 -*-
"""
@description: discrete optimality system and its solution paths
"""
import numpy as np
import pytest
import scipy.linalg

from ocpfem.assembly import (CONSTANT, EmptySystemError, build_dofmap, build_regularization_field, global_l2_error,
                             zero_target)
from ocpfem.bench.targets import benchmark_box
from ocpfem.linalg import diagonal_inverse
from ocpfem.mesh import build_interval_mesh, build_unit_cube_mesh, build_unit_square_mesh, refine, uniform_refine
from ocpfem.ocp import (OcpProblem, SolverSettings, block_residuals, bp_scaling, build_problem, build_system,
                        cost_functional, l2_projection, lowest_eigenvalue_estimate, recover_control, schur_operator,
                        solve, solve_all, solve_coupled_bpcg, solve_coupled_gmres, solve_direct,
                        solve_l2_regularization_baseline, solve_schur)
from ocpfem.ocp.solvers import _finish as finish_solution

ALL_SOLVERS = ('cg', 'pcg', 'pcg_diag', 'gmres', 'bpcg', 'direct')


def _square_system(inner='cholesky', target=None):
    mesh = refine(build_unit_square_mesh(), [5, 6, 20])
    return build_system(build_problem(mesh, target or benchmark_box(2)), inner=inner)


def _interval_system():
    mesh = build_interval_mesh(4)
    return build_system(build_problem(mesh, benchmark_box(1)))


def test_schur_operator_constant_rho():
    mesh = build_unit_square_mesh()
    system = build_system(build_problem(mesh, benchmark_box(2), CONSTANT, 0.01))
    x = np.random.default_rng(0).standard_normal(system.num_dofs)
    expected = system.mass @ x + 0.01 * (system.stiffness @ x)
    np.testing.assert_allclose(schur_operator(system).matvec(x), expected, rtol=1e-10)
    np.testing.assert_allclose(system.weighted_stiffness.toarray(), system.stiffness.toarray() / 0.01, rtol=1e-14)


@pytest.mark.parametrize("name", ALL_SOLVERS)
def test_zero_target_gives_zero(name):
    system = _square_system(target=zero_target())
    solution = solve(system, name)
    assert solution.converged
    np.testing.assert_allclose(solution.u, 0.0, atol=1e-14)
    np.testing.assert_allclose(solution.p, 0.0, atol=1e-14)


def test_solvers_agree():
    system = _square_system()
    reference = solve_direct(system)
    assert reference.converged
    for name in ('cg', 'pcg', 'pcg_diag', 'gmres', 'bpcg'):
        solution = solve(system, name, tol=1e-10)
        assert solution.converged, name
        assert solution.revision == system.revision
        np.testing.assert_allclose(solution.u, reference.u, rtol=1e-6, atol=1e-9 * np.abs(reference.u).max())
        np.testing.assert_allclose(solution.p, reference.p, rtol=1e-5, atol=1e-8 * np.abs(reference.p).max())
        assert max(solution.block_residuals) <= 1e-6


def test_bpcg_dense_saddle_point():
    system = _interval_system()
    n = system.num_dofs
    assert n == 3
    rhs = np.concatenate([np.zeros(n), -system.load])
    dense = np.linalg.solve(system.symmetric_matrix().toarray(), rhs)
    solution = solve_coupled_bpcg(system, delta=0.5, tol=1e-12)
    assert solution.converged
    np.testing.assert_allclose(solution.p, dense[:n], rtol=1e-9, atol=1e-14)
    np.testing.assert_allclose(solution.u, dense[n:], rtol=1e-9, atol=1e-14)


def test_bpcg_approximate_inverse():
    mesh = build_unit_square_mesh()
    system = build_system(build_problem(mesh, benchmark_box(2)))
    jacobi = diagonal_inverse(system.weighted_stiffness.diagonal())
    c_inverse, first, delta = bp_scaling(system, approx_inverse=jacobi, lanczos_steps=20)
    eigenvalues = np.linalg.eigvals(np.diag(1.0 / system.weighted_stiffness.diagonal())
                                    @ system.weighted_stiffness.toarray()).real
    assert 0.0 < delta < eigenvalues.min()
    reference = solve_direct(system)
    solution = solve_coupled_bpcg(system, tol=1e-10, approx_inverse=jacobi)
    assert solution.converged
    np.testing.assert_allclose(solution.u, reference.u, rtol=1e-6, atol=1e-10)


def test_bpcg_jacobi_inverse_on_finer_mesh():
    mesh = build_unit_square_mesh()
    for _ in range(3):
        mesh = uniform_refine(mesh)
    system = build_system(build_problem(mesh, benchmark_box(2)))
    assert system.num_dofs == 961
    diagonal = system.weighted_stiffness.diagonal()
    jacobi = diagonal_inverse(diagonal)
    lowest = scipy.linalg.eigh(system.weighted_stiffness.toarray(), np.diag(diagonal), eigvals_only=True)[0]
    estimate = lowest_eigenvalue_estimate(system, jacobi)
    assert 0.98 * lowest <= estimate <= 1.05 * lowest
    _, _, delta = bp_scaling(system, approx_inverse=jacobi)
    assert 0.5 * lowest < delta < lowest
    reference = solve_direct(system)
    solution = solve_coupled_bpcg(system, tol=1e-10, approx_inverse=jacobi)
    assert solution.converged
    assert not solution.report.breakdown
    assert np.linalg.norm(solution.u - reference.u) <= 1e-5 * np.linalg.norm(reference.u)


@pytest.mark.parametrize("dim", [2, 3])
def test_solvers_agree_at_default_tolerance(dim):
    if dim == 2:
        mesh = uniform_refine(uniform_refine(build_unit_square_mesh()))
    else:
        mesh = uniform_refine(build_unit_cube_mesh(4))
    system = build_system(build_problem(mesh, benchmark_box(dim)))
    assert system.num_dofs == (225 if dim == 2 else 343)
    tol = 1e-6
    reference = solve_direct(system)
    for name in ('pcg', 'gmres', 'bpcg'):
        solution = solve(system, name, tol=tol)
        assert solution.converged, name
        assert max(solution.block_residuals) <= 10.0 * tol, name
        assert np.linalg.norm(solution.u - reference.u) <= 10.0 * tol * np.linalg.norm(reference.u), name


def test_unreached_block_residuals_clear_converged():
    system = _square_system()
    solution = solve(system, 'pcg')
    assert solution.converged
    shifted = solution.u + 1e-2 * np.abs(solution.u).max()
    stale = finish_solution(system, shifted, solution.p, solution.report, 'pcg')
    assert not stale.converged
    assert max(stale.block_residuals) > 1e-5


def test_bp_scaling_exact():
    system = _interval_system()
    c_inverse, first, delta = bp_scaling(system, delta=0.25)
    x = np.array([1.0, 2.0, 3.0])
    exact = system.k_rho_inverse.matvec(x)
    np.testing.assert_allclose(c_inverse.matvec(x), 4.0 * exact)
    np.testing.assert_allclose(first.matvec(x), exact / 0.75)
    with pytest.raises(ValueError):
        bp_scaling(system, delta=1.0)


def test_gmres_approximate_inverse():
    system = _square_system()
    jacobi = diagonal_inverse(system.weighted_stiffness.diagonal())
    reference = solve_direct(system)
    solution = solve_coupled_gmres(system, tol=1e-10, approx_inverse=jacobi)
    assert solution.converged
    np.testing.assert_allclose(solution.u, reference.u, rtol=1e-6, atol=1e-10)


def test_inner_pcg_mode():
    exact = solve_schur(_square_system(), 'pcg_lump', tol=1e-10)
    system = _square_system(inner='pcg')
    inner = solve_schur(system, 'pcg_lump', tol=1e-10)
    assert inner.report.inner == 'pcg'
    assert inner.report.inner_iterations > 0
    np.testing.assert_allclose(inner.u, exact.u, rtol=1e-6)


def test_recover_control():
    system = _square_system()
    solution = solve(system, 'pcg', tol=1e-10)
    z = recover_control(system, solution)
    assert solution.z is z
    np.testing.assert_allclose(system.mass @ z, system.stiffness @ solution.u, atol=1e-12)


def test_cost_functional():
    system = _square_system()
    solution = solve(system, 'direct')
    tracking, regularization, total = cost_functional(system, solution)
    assert tracking > 0.0 and regularization > 0.0
    assert total == pytest.approx(tracking + regularization)
    # u = 0 is admissible, with cost |u_bar|^2 / 2
    assert total < 0.5 * 0.25
    zero = solve(system, 'direct')
    zero.u = np.zeros_like(zero.u)
    assert cost_functional(system, zero)[2] == pytest.approx(0.125, rel=1e-12)


def test_block_residuals_of_exact_solution():
    system = _interval_system()
    solution = solve_direct(system)
    first, second = block_residuals(system, solution.u, solution.p)
    assert first < 1e-12 and second < 1e-12
    first, second = block_residuals(system, solution.u + 1.0, solution.p)
    assert first > 1e-3


def test_l2_projection():
    system = _square_system()
    u = l2_projection(system)
    np.testing.assert_allclose(system.mass @ u, system.load, atol=1e-14)


def test_l2_baseline_monotone_in_rho():
    mesh = refine(build_unit_square_mesh(), range(32))
    dofmap = build_dofmap(mesh)
    target = benchmark_box(2)
    errors = []
    for rho in (1e-2, 1e-4, 1e-6):
        solution = solve_l2_regularization_baseline(mesh, dofmap, target, rho)
        assert solution.converged
        assert solution.method == 'l2_direct'
        np.testing.assert_allclose(solution.z, -solution.p / rho)
        errors.append(global_l2_error(mesh, dofmap, solution.u, target))
    assert errors[0] > errors[1] > errors[2]
    assert errors[0] < target.l2_norm


def test_l2_baseline_gmres_matches_direct():
    mesh = build_unit_square_mesh()
    dofmap = build_dofmap(mesh)
    direct = solve_l2_regularization_baseline(mesh, dofmap, benchmark_box(2), 1e-3)
    iterative = solve_l2_regularization_baseline(mesh, dofmap, benchmark_box(2), 1e-3, method='gmres', tol=1e-12)
    assert iterative.converged
    np.testing.assert_allclose(iterative.u, direct.u, rtol=1e-7, atol=1e-12)
    with pytest.raises(ValueError):
        solve_l2_regularization_baseline(mesh, dofmap, benchmark_box(2), 0.0)
    with pytest.raises(ValueError):
        solve_l2_regularization_baseline(mesh, dofmap, benchmark_box(2), 1e-3, method='minres')


def test_problem_validation():
    mesh = build_unit_square_mesh()
    other = refine(mesh, [0])
    with pytest.raises(ValueError):
        OcpProblem(mesh, build_dofmap(mesh), benchmark_box(2), build_regularization_field(other))
    with pytest.raises(EmptySystemError):
        build_system(build_problem(build_interval_mesh(1), benchmark_box(1)))


def test_dispatch_errors():
    system = _interval_system()
    with pytest.raises(NotImplementedError):
        solve(system, 'minres')
    with pytest.raises(ValueError):
        solve_schur(system, 'jacobi')
    with pytest.raises(NotImplementedError):
        SolverSettings(names=('pcg', 'amg'))
    with pytest.raises(ValueError):
        SolverSettings(names=())


def test_solve_all():
    system = _square_system()
    solutions = solve_all(system, SolverSettings(names=('pcg', 'cg', 'bpcg'), tol=1e-8))
    assert list(solutions) == ['pcg', 'cg', 'bpcg']
    assert all(s.converged for s in solutions.values())
