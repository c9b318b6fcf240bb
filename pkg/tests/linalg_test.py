# -*- coding: utf-8 -*-
"""
@description: factorization, operators and Krylov solvers against dense oracles
"""
import numpy as np
import pytest
import scipy.sparse as sp

from ocpfem.assembly import (assemble_mass, assemble_stiffness, assemble_weighted_stiffness, build_dofmap,
                             build_regularization_field)
from ocpfem.linalg import (InverseOperator, NotPositiveDefiniteError, block_diagonal_operator, block_operator,
                           bp_transformed_operator, cg, check_linearity, cholesky_factor, diagonal_inverse, gmres,
                           identity_operator, is_symmetric, lanczos_extreme_eigenvalues, lanczos_max_eigenvalue, pcg,
                           scaled_operator, schur_complement_operator)
from ocpfem.mesh import build_interval_mesh, build_unit_square_mesh, refine


def _random_spd(rng, n, shift=1.0):
    a = rng.standard_normal((n, n))
    return a @ a.T + shift * n * np.eye(n)


def _square_blocks():
    mesh = refine(build_unit_square_mesh(), [0, 1, 13])
    dofmap = build_dofmap(mesh)
    rho = build_regularization_field(mesh)
    return (assemble_weighted_stiffness(mesh, dofmap, rho), assemble_stiffness(mesh, dofmap),
            assemble_mass(mesh, dofmap))


def test_factor_identity():
    factor = cholesky_factor(sp.identity(3, format='csc'), backend='superlu')
    b = np.array([1.0, -2.0, 3.0])
    np.testing.assert_allclose(factor.solve(b), b)
    np.testing.assert_allclose(factor.cholesky_diagonal(), 1.0)


def test_factor_diagonal():
    factor = cholesky_factor(sp.diags([4.0, 4.0, 4.0]), backend='superlu')
    np.testing.assert_allclose(factor.cholesky_diagonal(), 2.0)
    np.testing.assert_allclose(factor(np.array([4.0, 8.0, 12.0])), [1.0, 2.0, 3.0])


def test_factor_fem_matrices():
    k_rho, k, m = _square_blocks()
    rng = np.random.default_rng(0)
    for matrix in (k_rho, k, m):
        factor = cholesky_factor(matrix)
        b = rng.standard_normal(matrix.shape[0])
        np.testing.assert_allclose(factor.solve(b), np.linalg.solve(matrix.toarray(), b), rtol=1e-9, atol=1e-12)
        assert np.all(factor.cholesky_diagonal() > 0.0)


@pytest.mark.parametrize("matrix", [np.array([[1.0, 2.0], [2.0, 1.0]]), np.diag([1.0, -1.0]),
                                    np.zeros((2, 2))])
def test_not_positive_definite(matrix):
    with pytest.raises(NotPositiveDefiniteError) as err:
        cholesky_factor(sp.csc_matrix(matrix), backend='superlu')
    assert err.value.pivot in (-1, 0, 1)
    assert isinstance(err.value, ValueError)


def test_factor_empty_and_bad_backend():
    factor = cholesky_factor(sp.csc_matrix((0, 0)), backend='superlu')
    assert factor.solve(np.zeros(0)).shape == (0,)
    with pytest.raises(ValueError):
        cholesky_factor(sp.identity(2), backend='lapack')
    with pytest.raises(ValueError):
        cholesky_factor(sp.csc_matrix(np.ones((2, 3))))


def test_cg_identity_one_iteration():
    b = np.array([1.0, 2.0, 3.0, 4.0])
    x, report = cg(sp.identity(4), b, tol=1e-12)
    np.testing.assert_allclose(x, b)
    assert report.iterations == 1
    assert report.converged
    assert report.history[0] == 1.0


def test_cg_zero_rhs():
    x, report = cg(sp.identity(3), np.zeros(3))
    assert report.converged and report.iterations == 0
    np.testing.assert_array_equal(x, 0.0)


def test_cg_dense_oracle():
    rng = np.random.default_rng(1)
    a = _random_spd(rng, 30)
    b = rng.standard_normal(30)
    x, report = cg(a, b, tol=1e-12)
    assert report.converged
    np.testing.assert_allclose(x, np.linalg.solve(a, b), rtol=1e-8, atol=1e-10)
    assert report.verified_residual <= 1e-10


def test_pcg_with_identity_is_cg():
    rng = np.random.default_rng(2)
    for _ in range(20):
        n = int(rng.integers(2, 25))
        a = _random_spd(rng, n)
        b = rng.standard_normal(n)
        x_cg, report_cg = cg(a, b, tol=1e-8)
        x_pcg, report_pcg = pcg(a, b, M=identity_operator(n), tol=1e-8)
        np.testing.assert_array_equal(x_cg, x_pcg)
        assert report_cg.iterations == report_pcg.iterations


def test_pcg_jacobi_helps_badly_scaled():
    rng = np.random.default_rng(3)
    scales = np.logspace(0, 4, 40)
    a = np.diag(scales) + 0.1 * np.diag(np.ones(39), 1) + 0.1 * np.diag(np.ones(39), -1)
    b = rng.standard_normal(40)
    _, plain = cg(a, b, tol=1e-8)
    x, jacobi = pcg(a, b, M=diagonal_inverse(np.diag(a)), tol=1e-8)
    assert jacobi.converged
    assert jacobi.iterations < plain.iterations
    np.testing.assert_allclose(a @ x, b, atol=1e-5)


def test_pcg_maxit_reports_failure():
    rng = np.random.default_rng(4)
    a = _random_spd(rng, 50, shift=0.01)
    _, report = pcg(a, rng.standard_normal(50), tol=1e-14, maxit=2)
    assert not report.converged
    assert report.failed
    assert report.iterations == 2


def test_cg_breakdown_on_indefinite():
    _, report = cg(np.diag([1.0, -1.0]), np.array([1.0, 1.0]))
    assert report.breakdown
    assert not report.converged


def test_gmres_identity():
    b = np.array([3.0, -1.0, 2.0])
    x, report = gmres(sp.identity(3), b, tol=1e-10)
    assert report.converged and report.iterations == 1
    np.testing.assert_allclose(x, b)


def test_gmres_nonsymmetric():
    a = np.array([[4.0, 1.0, 0.0, 2.0],
                  [-1.0, 3.0, 1.0, 0.0],
                  [0.0, -2.0, 5.0, 1.0],
                  [1.0, 0.0, -1.0, 2.0]])
    b = np.array([1.0, 2.0, 3.0, 4.0])
    x, report = gmres(a, b, tol=1e-12)
    assert report.converged
    assert report.iterations <= 4
    np.testing.assert_allclose(x, np.linalg.solve(a, b), rtol=1e-9)
    history = np.array(report.history)
    assert np.all(np.diff(history) <= 0.0)


def test_gmres_preconditioned_dense_oracle():
    rng = np.random.default_rng(5)
    n = 80
    a = np.diag(np.linspace(1.0, 50.0, n)) + 0.5 * rng.standard_normal((n, n)) / np.sqrt(n)
    b = rng.standard_normal(n)
    x, report = gmres(a, b, M=diagonal_inverse(np.diag(a)), tol=1e-10)
    assert report.converged
    np.testing.assert_allclose(x, np.linalg.solve(a, b), rtol=1e-7, atol=1e-9)


def test_gmres_stagnation():
    n = 40
    shift = sp.csr_matrix((np.ones(n), (np.r_[1:n, 0], np.arange(n))), shape=(n, n))
    b = np.zeros(n)
    b[0] = 1.0
    _, report = gmres(shift, b, tol=1e-8, stagnation=10)
    assert report.stagnation
    assert not report.converged
    assert report.iterations == 10


def test_acceptance_check_extends_iteration():
    rng = np.random.default_rng(5)
    n = 80
    a = np.diag(np.linspace(1.0, 50.0, n)) + 0.5 * rng.standard_normal((n, n)) / np.sqrt(n)
    b = rng.standard_normal(n)
    jacobi = diagonal_inverse(np.diag(a))

    def small_residual(x):
        return np.linalg.norm(b - a @ x) <= 1e-5 * np.linalg.norm(b)

    _, plain = gmres(a, b, M=jacobi, tol=1e-3)
    x, report = gmres(a, b, M=jacobi, tol=1e-3, accept=small_residual)
    assert report.converged
    assert small_residual(x)
    assert report.iterations > plain.iterations
    _, rejected = gmres(a, b, M=jacobi, tol=1e-3, accept=lambda x: False)
    assert not rejected.converged
    assert rejected.residual <= 1e-7


def test_pcg_acceptance_check():
    spd = sp.diags(np.linspace(1.0, 100.0, 50))
    b = np.ones(50)
    x, report = pcg(spd, b, tol=1e-2, accept=lambda x: np.linalg.norm(b - spd @ x) <= 1e-5 * np.sqrt(50))
    assert report.converged
    assert np.linalg.norm(b - spd @ x) <= 1e-5 * np.sqrt(50)
    _, rejected = pcg(spd, b, tol=1e-2, accept=lambda x: False)
    assert not rejected.converged


def test_lanczos_diagonal():
    a = sp.diags(np.arange(1.0, 11.0))
    low, high = lanczos_extreme_eigenvalues(a, steps=10)
    assert low == pytest.approx(1.0, rel=1e-6)
    assert high == pytest.approx(10.0, rel=1e-6)
    assert lanczos_max_eigenvalue(a, steps=10) == pytest.approx(10.0, rel=1e-6)


def test_lanczos_preconditioned_identity():
    d = np.arange(1.0, 6.0)
    low, high = lanczos_extreme_eigenvalues(sp.diags(d), diagonal_inverse(d), steps=5)
    assert low == pytest.approx(1.0, rel=1e-8)
    assert high == pytest.approx(1.0, rel=1e-8)


def test_lanczos_bounds_spectrum():
    k_rho, k, m = _square_blocks()
    eigenvalues = np.linalg.eigvalsh(k_rho.toarray())
    low, high = lanczos_extreme_eigenvalues(k_rho, steps=20, seed=3)
    assert eigenvalues[0] * (1.0 - 1e-10) <= low <= high <= eigenvalues[-1] * (1.0 + 1e-10)
    assert low > 0.0


def test_inverse_operator_modes_agree():
    k_rho, _, _ = _square_blocks()
    rng = np.random.default_rng(6)
    b = rng.standard_normal(k_rho.shape[0])
    exact = InverseOperator(k_rho)
    inner = InverseOperator(k_rho, mode='pcg', tol=1e-13)
    np.testing.assert_allclose(inner.matvec(b), exact.matvec(b), rtol=1e-8)
    assert inner.inner_iterations > 0
    assert exact.applications == 1
    with pytest.raises(NotImplementedError):
        InverseOperator(k_rho, mode='multigrid')


def test_schur_complement_dense():
    k_rho, k, m = _square_blocks()
    schur = schur_complement_operator(k, InverseOperator(k_rho), m)
    dense = m.toarray() + k.toarray() @ np.linalg.solve(k_rho.toarray(), k.toarray())
    x = np.random.default_rng(7).standard_normal(k.shape[0])
    np.testing.assert_allclose(schur.matvec(x), dense @ x, rtol=1e-10)


def test_bp_operator_symmetric_positive():
    k_rho, k, m = _square_blocks()
    c_inverse = scaled_operator(InverseOperator(k_rho), 2.0)
    operator = bp_transformed_operator(k_rho, k, m, c_inverse)
    n2 = operator.shape[0]
    dense = np.column_stack([operator.matvec(e) for e in np.eye(n2)])
    np.testing.assert_allclose(dense, dense.T, atol=1e-8 * np.abs(dense).max())
    assert np.linalg.eigvalsh(0.5 * (dense + dense.T))[0] > 0.0
    assert check_linearity(operator, rng=0, rtol=1e-10)


def test_block_operators():
    a = sp.diags([1.0, 2.0])
    b = sp.diags([3.0, 4.0])
    op = block_operator(a, b, b, a)
    np.testing.assert_allclose(op.matvec(np.array([1.0, 1.0, 1.0, 1.0])), [4.0, 6.0, 4.0, 6.0])
    diag = block_diagonal_operator(diagonal_inverse([1.0, 2.0]), diagonal_inverse([4.0]))
    np.testing.assert_allclose(diag.matvec(np.array([2.0, 2.0, 2.0])), [2.0, 1.0, 0.5])
    with pytest.raises(ValueError):
        block_operator(a, sp.identity(3), b, a)
    with pytest.raises(ValueError):
        diagonal_inverse([1.0, 0.0])


def test_is_symmetric():
    k_rho, k, m = _square_blocks()
    assert is_symmetric(k_rho) and is_symmetric(k) and is_symmetric(m)
    assert not is_symmetric(sp.csr_matrix(np.array([[1.0, 2.0], [0.0, 1.0]])))
    assert check_linearity(InverseOperator(k), rng=1, rtol=1e-10)


def test_interval_weighted_stiffness_positive_definite():
    mesh = build_interval_mesh(4)
    k_rho = assemble_weighted_stiffness(mesh, build_dofmap(mesh), build_regularization_field(mesh))
    low, _ = lanczos_extreme_eigenvalues(k_rho, steps=50)
    assert low > 0.0


def test_report_row():
    _, report = pcg(sp.diags([1.0, 2.0, 3.0]), np.ones(3), tol=1e-10)
    row = report.to_row()
    assert list(row)[:4] == ['solver', 'dofs', 'iterations', 'residual']
    assert row['solver'] == 'pcg' and row['dofs'] == 3
    assert row['converged'] and row['residual'] <= 1e-10
