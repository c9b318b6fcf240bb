# -*- coding: utf-8 -*-
"""
@description: sparse factorization of symmetric positive definite matrices

CHOLMOD (scikit-sparse) is used when installed. Otherwise SuperLU runs in
symmetric mode with a minimum-degree ordering of A^T + A and no pivoting,
so that its U diagonal holds the LDL^T pivots and a nonpositive pivot
identifies a matrix that is not positive definite.
"""
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ocpfem.utils.logger import logger

try:
    from sksparse import cholmod

    _has_sksparse_cholmod = True
except ImportError:
    _has_sksparse_cholmod = False


class NotPositiveDefiniteError(ValueError):
    """Raised when a pivot of the factorization is not positive."""

    def __init__(self, pivot, value=None):
        self.pivot = int(pivot)
        self.value = value
        super(NotPositiveDefiniteError, self).__init__(
            "matrix is not positive definite: pivot {} is {}".format(self.pivot, value))


class SpdFactorization(object):
    """Fill-reducing sparse factorization usable for repeated solves."""

    def __init__(self, matrix, backend='auto'):
        matrix = sp.csc_matrix(matrix, dtype=float)
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError("matrix must be square, got {}".format(matrix.shape))
        if backend == 'auto':
            backend = 'cholmod' if _has_sksparse_cholmod else 'superlu'
        if backend == 'cholmod' and not _has_sksparse_cholmod:
            raise ImportError("scikit-sparse is not installed on this system")
        if backend not in ('cholmod', 'superlu'):
            raise ValueError("unknown factorization backend {!r}".format(backend))
        self.shape = matrix.shape
        self.backend = backend
        if backend == 'cholmod':
            self._factor_cholmod(matrix)
        else:
            self._factor_superlu(matrix)
        logger.debug("factorized {}x{} matrix with {}".format(self.shape[0], self.shape[1], backend))

    def _factor_cholmod(self, matrix):
        try:
            self._factor = cholmod.cholesky(matrix)
        except cholmod.CholmodNotPositiveDefiniteError as err:
            raise NotPositiveDefiniteError(getattr(err, 'column', -1), str(err))
        perm = self._factor.P()
        diag = np.empty(self.shape[0])
        diag[perm] = self._factor.L().diagonal()
        self._diagonal = diag

    def _factor_superlu(self, matrix):
        if self.shape[0] == 0:
            self._factor = None
            self._diagonal = np.zeros(0)
            return
        try:
            self._factor = spla.splu(matrix, permc_spec='MMD_AT_PLUS_A', diag_pivot_thresh=0.0,
                                     options=dict(SymmetricMode=True))
        except RuntimeError as err:
            # exactly singular: SuperLU reports the failing column, 1-based
            digits = [int(tok) for tok in str(err).replace('.', ' ').split() if tok.isdigit()]
            raise NotPositiveDefiniteError(digits[0] - 1 if digits else -1, 0.0)
        pivots = self._factor.U.diagonal()
        # position p of the factor holds original column argsort(perm_c)[p]
        original = np.argsort(self._factor.perm_c)
        bad = np.flatnonzero(~(pivots > 0.0))
        if bad.size:
            raise NotPositiveDefiniteError(original[bad[0]], float(pivots[bad[0]]))
        diag = np.empty(self.shape[0])
        diag[original] = np.sqrt(pivots)
        self._diagonal = diag

    def solve(self, rhs):
        rhs = np.asarray(rhs, dtype=float)
        if self._factor is None:
            return np.zeros_like(rhs)
        if self.backend == 'cholmod':
            return self._factor(rhs)
        return self._factor.solve(rhs)

    __call__ = solve

    def cholesky_diagonal(self):
        """Diagonal of the Cholesky factor, in the original ordering."""
        return self._diagonal.copy()

    def as_operator(self):
        return spla.LinearOperator(self.shape, matvec=self.solve, dtype=float)


def cholesky_factor(matrix, backend='auto') -> SpdFactorization:
    """Factorize a symmetric positive definite sparse matrix."""
    return SpdFactorization(matrix, backend=backend)
