# -*- coding: utf-8 -*-
"""
@description: linear operator helpers built on scipy.sparse.linalg.LinearOperator
"""
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ocpfem.linalg.factorization import SpdFactorization, cholesky_factor

INNER_MODES = ('cholesky', 'pcg')


def as_operator(matrix) -> spla.LinearOperator:
    """LinearOperator view of a sparse or dense matrix, operators pass through."""
    if isinstance(matrix, spla.LinearOperator):
        return matrix
    return spla.aslinearoperator(matrix)


def identity_operator(size) -> spla.LinearOperator:
    return spla.LinearOperator((size, size), matvec=lambda x: np.array(x, dtype=float, copy=True), dtype=float)


def diagonal_inverse(diagonal) -> spla.LinearOperator:
    """Apply x -> x / d for a positive diagonal, given as vector or diagonal matrix."""
    if sp.issparse(diagonal):
        diagonal = diagonal.diagonal()
    diagonal = np.asarray(diagonal, dtype=float)
    if np.any(diagonal <= 0.0):
        raise ValueError("diagonal preconditioner needs positive entries")
    inv = 1.0 / diagonal
    return spla.LinearOperator((inv.size, inv.size), matvec=lambda x: inv * np.ravel(x), dtype=float)


def scaled_operator(op, alpha) -> spla.LinearOperator:
    op = as_operator(op)
    alpha = float(alpha)
    return spla.LinearOperator(op.shape, matvec=lambda x: alpha * op.matvec(x), dtype=float)


def block_diagonal_operator(first, second) -> spla.LinearOperator:
    """diag(first, second) acting on stacked vectors [x1; x2]."""
    first, second = as_operator(first), as_operator(second)
    n1, n2 = first.shape[0], second.shape[0]

    def matvec(x):
        x = np.ravel(x)
        return np.concatenate([first.matvec(x[:n1]), second.matvec(x[n1:])])

    return spla.LinearOperator((n1 + n2, n1 + n2), matvec=matvec, dtype=float)


def block_operator(a11, a12, a21, a22) -> spla.LinearOperator:
    """[[a11, a12], [a21, a22]] from square blocks of equal size."""
    a11, a12, a21, a22 = (as_operator(a) for a in (a11, a12, a21, a22))
    n = a11.shape[0]
    for a in (a12, a21, a22):
        if a.shape != (n, n):
            raise ValueError("block shapes differ: {} vs {}".format(a.shape, (n, n)))

    def matvec(x):
        x = np.ravel(x)
        top, bottom = x[:n], x[n:]
        return np.concatenate([a11.matvec(top) + a12.matvec(bottom), a21.matvec(top) + a22.matvec(bottom)])

    return spla.LinearOperator((2 * n, 2 * n), matvec=matvec, dtype=float)


class InverseOperator(spla.LinearOperator):
    """
    Action of A^{-1} for an SPD sparse matrix A.

    mode 'cholesky' uses a sparse factorization, mode 'pcg' runs Jacobi
    preconditioned CG to relative preconditioned residual `tol` per apply.
    Inner iterations are accumulated in `inner_iterations`.
    """

    def __init__(self, matrix, mode='cholesky', tol=1e-12, maxit=None, factorization: SpdFactorization = None):
        if mode not in INNER_MODES:
            raise NotImplementedError("inner solve mode {!r} not in {}".format(mode, INNER_MODES))
        matrix = sp.csr_matrix(matrix)
        super(InverseOperator, self).__init__(dtype=float, shape=matrix.shape)
        self.matrix = matrix
        self.mode = mode
        self.tol = tol
        self.maxit = maxit
        self.inner_iterations = 0
        self.applications = 0
        self.factorization = None
        self._jacobi = None
        if mode == 'cholesky':
            self.factorization = factorization or cholesky_factor(matrix)
        else:
            self._jacobi = diagonal_inverse(matrix.diagonal())

    def _matvec(self, x):
        self.applications += 1
        x = np.ravel(x)
        if self.mode == 'cholesky':
            return self.factorization.solve(x)
        # deferred import, krylov depends on this module
        from ocpfem.linalg.krylov import pcg
        y, report = pcg(self.matrix, x, M=self._jacobi, tol=self.tol, maxit=self.maxit)
        self.inner_iterations += report.iterations
        return y

    def _adjoint(self):
        return self


def schur_complement_operator(k, k_rho_inverse, m) -> spla.LinearOperator:
    """S = M + K K_rho^{-1} K applied matrix-free."""
    k, m = as_operator(k), as_operator(m)
    return spla.LinearOperator(k.shape, matvec=lambda x: m.matvec(x) + k.matvec(k_rho_inverse.matvec(k.matvec(x))),
                               dtype=float)


def check_linearity(op, rng=None, trials=3, rtol=1e-12):
    """True if op(a x + b y) = a op(x) + b op(y) on random vectors."""
    op = as_operator(op)
    rng = np.random.default_rng(rng)
    n = op.shape[1]
    for _ in range(trials):
        x, y = rng.standard_normal(n), rng.standard_normal(n)
        a, b = rng.standard_normal(2)
        lhs = op.matvec(a * x + b * y)
        rhs = a * op.matvec(x) + b * op.matvec(y)
        if np.linalg.norm(lhs - rhs) > rtol * max(np.linalg.norm(rhs), 1.0):
            return False
    return True


def is_symmetric(matrix, rtol=0.0):
    """Transpose compare of a sparse matrix."""
    matrix = sp.csr_matrix(matrix)
    diff = abs(matrix - matrix.T)
    if diff.nnz == 0:
        return True
    return diff.max() <= rtol * abs(matrix).max()
