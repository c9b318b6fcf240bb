# -*- coding: utf-8 -*-
"""
@description: Krylov solvers on abstract linear operators: cg, pcg, gmres, bp_cg

The preconditioner argument `M` follows scipy: it approximates A^{-1} and is
applied as z = M r. Solver failure is never raised; it is reported through
SolverReport (converged / breakdown / stagnation flags) together with the
last iterate.
"""
import time
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from ocpfem.linalg.operators import as_operator, block_diagonal_operator, identity_operator
from ocpfem.utils.logger import logger

DEFAULT_MAXIT = 10000
DEFAULT_STAGNATION = 50
REORTHOGONALIZATION_THRESHOLD = 1e-8
# with an acceptance check, give up once the own residual is this far below tol
ACCEPT_REDUCTION = 1e-4

# iterations between debug log lines
LOG_PERIOD = 100

CSV_COLUMNS = ('solver', 'dofs', 'iterations', 'residual', 'converged', 'breakdown', 'inner', 'seconds')


@dataclass
class SolverReport:
    solver: str
    dofs: int
    iterations: int = 0
    residual: float = 1.0
    converged: bool = False
    breakdown: bool = False
    stagnation: bool = False
    tol: float = 1e-6
    inner: Optional[str] = None
    inner_iterations: int = 0
    verified_residual: Optional[float] = None
    seconds: float = 0.0
    history: List[float] = field(default_factory=list, repr=False)

    @property
    def failed(self):
        return not self.converged

    def to_row(self):
        """Flat dict for one csv row."""
        row = asdict(self)
        return {key: row[key] for key in CSV_COLUMNS}


def set_log_period(period):
    """Iterations between debug lines of the solver loops."""
    global LOG_PERIOD
    LOG_PERIOD = max(1, int(period))


def _dot(x, y):
    # numpy pairwise summation: fixed order, independent of BLAS threading
    return float(np.sum(x * y))


def _norm(x):
    return np.sqrt(_dot(x, x))


def _prepare(A, b, M, x0):
    A = as_operator(A)
    b = np.asarray(b, dtype=float).ravel()
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise ValueError("operator shape {} does not match rhs of size {}".format(A.shape, b.shape[0]))
    M = identity_operator(n) if M is None else as_operator(M)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float).ravel()
    return A, b, M, x


def _accepted(name, accept, x, residual, tol):
    """None while iterating should go on, else the converged flag."""
    if accept is None or accept(x):
        return True
    if residual <= tol * ACCEPT_REDUCTION:
        logger.warning("{}: residual {:.3e} reached, acceptance check still fails".format(name, residual))
        return False
    return None


def _conjugate_gradient(A, b, M=None, tol=1e-6, maxit=None, x0=None, name='pcg', coefficients=None, quiet=False,
                        accept=None):
    """
    Preconditioned CG with the relative preconditioned residual stopping rule
    sqrt(r^T M r) <= tol * sqrt(r0^T M r0).

    The step lengths alpha_k and ratios beta_k are appended to `coefficients`
    (a pair of lists) when given. `accept(x)` is an extra check on the
    iterate once the residual rule holds; iteration goes on while it fails.
    """
    start = time.perf_counter()
    A, b, M, x = _prepare(A, b, M, x0)
    maxit = DEFAULT_MAXIT if maxit is None else int(maxit)
    report = SolverReport(solver=name, dofs=b.shape[0], tol=tol)

    r = b - A.matvec(x) if x0 is not None else b.copy()
    z = M.matvec(r)
    rz = _dot(r, z)
    if rz < 0.0:
        report.breakdown = True
        logger.warning("{}: preconditioner is not positive definite".format(name))
        return x, _finish(report, start)
    norm0 = np.sqrt(rz)
    report.history.append(1.0)
    if norm0 == 0.0:
        report.residual = 0.0
        report.converged = True
        return x, _finish(report, start)

    p = z.copy()
    for it in range(1, maxit + 1):
        q = A.matvec(p)
        pq = _dot(p, q)
        if pq <= 0.0:
            report.breakdown = True
            logger.warning("{}: breakdown at iteration {}, p^T A p = {:.3e}".format(name, it, pq))
            break
        alpha = rz / pq
        x += alpha * p
        r -= alpha * q
        z = M.matvec(r)
        rz_new = _dot(r, z)
        report.iterations = it
        if rz_new < 0.0:
            report.breakdown = True
            logger.warning("{}: negative preconditioned residual at iteration {}".format(name, it))
            break
        beta = rz_new / rz
        if coefficients is not None:
            coefficients[0].append(alpha)
            coefficients[1].append(beta)
        report.residual = np.sqrt(rz_new) / norm0
        report.history.append(report.residual)
        if it % LOG_PERIOD == 0:
            logger.debug("{}: iteration {} residual {:.3e}".format(name, it, report.residual))
        if report.residual <= tol:
            done = _accepted(name, accept, x, report.residual, tol)
            if done is not None:
                report.converged = done
                break
        p = z + beta * p
        rz = rz_new

    r_true = b - A.matvec(x)
    report.verified_residual = np.sqrt(max(_dot(r_true, M.matvec(r_true)), 0.0)) / norm0
    return x, _finish(report, start, quiet)


def _finish(report, start, quiet=False):
    report.seconds = time.perf_counter() - start
    if not report.converged and not quiet:
        logger.warning("{} stopped after {} iterations at residual {:.3e}".format(
            report.solver, report.iterations, report.residual))
    return report


def cg(A, b, tol=1e-6, maxit=None, x0=None, accept=None):
    """Unpreconditioned CG, stops on ||b - A x|| <= tol * ||b||."""
    return _conjugate_gradient(A, b, None, tol=tol, maxit=maxit, x0=x0, name='cg', accept=accept)


def pcg(A, b, M=None, tol=1e-6, maxit=None, x0=None, name='pcg', accept=None):
    """Preconditioned CG, stops on the relative preconditioned residual."""
    return _conjugate_gradient(A, b, M, tol=tol, maxit=maxit, x0=x0, name=name, accept=accept)


def _krylov_iterate(x0, basis, hessenberg, g, k):
    upper = np.zeros((k, k))
    for col, values in enumerate(hessenberg[:k]):
        upper[:col + 1, col] = values
    y = scipy.linalg.solve_triangular(upper, np.asarray(g[:k]), lower=False)
    return x0 + basis[:k].T @ y


def gmres(A, b, M=None, tol=1e-6, maxit=None, x0=None, stagnation=DEFAULT_STAGNATION, name='gmres', accept=None):
    """
    Left preconditioned, unrestarted GMRES.

    Arnoldi with modified Gram-Schmidt and a second pass whenever the new
    basis vector keeps a component above 1e-8 along the previous ones;
    the least squares problem is updated with Givens rotations. Stops on
    ||M(b - A x)|| <= tol * ||M(b - A x0)||, or flags stagnation after
    `stagnation` iterations without decrease. With `accept`, the iterate
    must also pass accept(x); the Krylov space keeps growing until it does.
    """
    start = time.perf_counter()
    A, b, M, x = _prepare(A, b, M, x0)
    n = b.shape[0]
    maxit = DEFAULT_MAXIT if maxit is None else int(maxit)
    report = SolverReport(solver=name, dofs=n, tol=tol)

    r0 = M.matvec(b - A.matvec(x))
    beta0 = _norm(r0)
    report.history.append(1.0)
    if beta0 == 0.0:
        report.residual = 0.0
        report.converged = True
        return x, _finish(report, start)

    limit = min(maxit, n)
    basis = np.empty((min(limit, 64) + 1, n))
    basis[0] = r0 / beta0
    hessenberg = []
    cosines, sines = [], []
    g = [beta0]
    best, best_it = 1.0, 0
    k = 0
    for j in range(limit):
        w = M.matvec(A.matvec(basis[j]))
        h = np.zeros(j + 2)
        for i in range(j + 1):
            h[i] = _dot(basis[i], w)
            w -= h[i] * basis[i]
        h_next = _norm(w)
        if h_next > 0.0:
            leak = np.sum(basis[:j + 1] * w, axis=1) / h_next
            if np.max(np.abs(leak)) > REORTHOGONALIZATION_THRESHOLD:
                for i in range(j + 1):
                    c = _dot(basis[i], w)
                    h[i] += c
                    w -= c * basis[i]
                h_next = _norm(w)
        h[j + 1] = h_next

        for i in range(j):
            h[i], h[i + 1] = cosines[i] * h[i] + sines[i] * h[i + 1], -sines[i] * h[i] + cosines[i] * h[i + 1]
        denom = np.hypot(h[j], h[j + 1])
        if denom == 0.0:
            report.breakdown = True
            logger.warning("{}: singular Hessenberg matrix at iteration {}".format(name, j + 1))
            break
        cosines.append(h[j] / denom)
        sines.append(h[j + 1] / denom)
        h[j] = denom
        h[j + 1] = 0.0
        g.append(-sines[j] * g[j])
        g[j] = cosines[j] * g[j]
        hessenberg.append(h[:j + 1])

        k = j + 1
        report.iterations = k
        report.residual = abs(g[j + 1]) / beta0
        report.history.append(report.residual)
        if k % LOG_PERIOD == 0:
            logger.debug("{}: iteration {} residual {:.3e}".format(name, k, report.residual))
        if report.residual <= tol:
            check = None if accept is None else _krylov_iterate(x, basis, hessenberg, g, k)
            done = _accepted(name, accept, check, report.residual, tol)
            if done is not None:
                report.converged = done
                break
        if report.residual < best * (1.0 - 1e-12):
            best, best_it = report.residual, k
        elif k - best_it >= stagnation:
            report.stagnation = True
            logger.warning("{}: no residual decrease over {} iterations".format(name, stagnation))
            break
        if h_next == 0.0:
            # invariant subspace reached, the iterate is exact up to rounding
            break
        if j + 1 == basis.shape[0]:
            basis = np.concatenate([basis, np.empty((min(basis.shape[0], limit + 1 - basis.shape[0]), n))])
        basis[j + 1] = w / h_next

    if k:
        x = _krylov_iterate(x, basis, hessenberg, g, k)
    report.verified_residual = _norm(M.matvec(b - A.matvec(x))) / beta0
    if not report.converged and report.verified_residual <= tol and (accept is None or accept(x)):
        report.converged = True
    return x, _finish(report, start)


def bp_transformed_operator(k_rho, k, m, c_inverse) -> spla.LinearOperator:
    """
    Symmetric positive definite operator T A of the Bramble-Pasciak transform.

    A = [[K_rho, K], [K, -M]] and T = [[K_rho C^{-1} - I, 0], [K C^{-1}, -I]],
    one application of C^{-1} per product.
    """
    k_rho, k, m, c_inverse = (as_operator(a) for a in (k_rho, k, m, c_inverse))
    n = k_rho.shape[0]

    def matvec(x):
        x = np.ravel(x)
        xp, xu = x[:n], x[n:]
        a = k_rho.matvec(xp) + k.matvec(xu)
        w = c_inverse.matvec(a)
        top = k_rho.matvec(w) - a
        bottom = k.matvec(w) - k.matvec(xp) + m.matvec(xu)
        return np.concatenate([top, bottom])

    return spla.LinearOperator((2 * n, 2 * n), matvec=matvec, dtype=float)


def bp_transformed_rhs(k_rho, k, c_inverse, b):
    """T b for b = [b_p; b_u]."""
    k_rho, k, c_inverse = (as_operator(a) for a in (k_rho, k, c_inverse))
    b = np.asarray(b, dtype=float).ravel()
    n = k_rho.shape[0]
    w = c_inverse.matvec(b[:n])
    return np.concatenate([k_rho.matvec(w) - b[:n], k.matvec(w) - b[n:]])


def bp_cg(blocks, c_inverse, first_precond, schur_precond, b, tol=1e-6, maxit=None, x0=None, accept=None):
    """
    Bramble-Pasciak CG for [[K_rho, K], [K, -M]] [p; u] = b.

    blocks: (K_rho, K, M); c_inverse applies C^{-1} with C < K_rho;
    first_precond applies (K_rho - C)^{-1} and schur_precond the inverse of
    the Schur preconditioner. CG runs on the transformed system with the
    preconditioner diag(first_precond, schur_precond); loss of positivity
    sets the breakdown flag.
    """
    k_rho, k, m = blocks
    operator = bp_transformed_operator(k_rho, k, m, c_inverse)
    rhs = bp_transformed_rhs(k_rho, k, c_inverse, b)
    precond = block_diagonal_operator(first_precond, schur_precond)
    return _conjugate_gradient(operator, rhs, precond, tol=tol, maxit=maxit, x0=x0, name='bp_cg', accept=accept)


def lanczos_extreme_eigenvalues(A, M=None, steps=20, seed=0):
    """
    Estimates (smallest, largest) of the eigenvalues of M A by `steps`
    Lanczos steps, read off the tridiagonal matrix built from the PCG
    coefficients.
    """
    A = as_operator(A)
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    b = rng.standard_normal(n)
    alphas, betas = [], []
    _conjugate_gradient(A, b, M, tol=0.0, maxit=min(steps, n), name='lanczos',
                        coefficients=(alphas, betas), quiet=True)
    if not alphas:
        raise ValueError("lanczos estimate needs at least one positive step")
    alphas = np.asarray(alphas)
    betas = np.asarray(betas)
    diag = 1.0 / alphas
    diag[1:] += betas[:-1] / alphas[:-1]
    offdiag = np.sqrt(betas[:-1]) / alphas[:-1]
    ritz = scipy.linalg.eigvalsh_tridiagonal(diag, offdiag)
    logger.debug("lanczos ritz range [{:.4e}, {:.4e}] after {} steps".format(ritz[0], ritz[-1], alphas.size))
    return float(ritz[0]), float(ritz[-1])


def lanczos_max_eigenvalue(A, M=None, steps=20, seed=0):
    return lanczos_extreme_eigenvalues(A, M, steps=steps, seed=seed)[1]
